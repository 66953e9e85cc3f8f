#pragma once

#include <cmath>

namespace cavsat {

/// Probability floor: survey components smaller than this after
/// normalization are snapped to zero (keeps hard zeros exact under
/// rounding).
inline constexpr double kComponentFloor = 1e-15;

/// Underflow clamp applied while folding long message products.
inline constexpr double kProductClamp = 1e-300;

/// Two-state cavity belief: probability that the variable is true/false.
struct Belief2 {
    double pt = 0.5;
    double pf = 0.5;

    double norm() const { return pt + pf; }

    /// Divides by the norm. Returns false (leaving the value untouched)
    /// when the norm vanishes, i.e. conflicting hard messages.
    bool normalize() {
        const double z = norm();
        if (z <= 0.0) return false;
        pt /= z;
        pf /= z;
        return true;
    }

    friend bool operator==(const Belief2&, const Belief2&) = default;
};

inline Belief2 belief_product(const Belief2& a, const Belief2& b) {
    Belief2 c{a.pt * b.pt, a.pf * b.pf};
    if (c.pt < kProductClamp) c.pt = 0.0;
    if (c.pf < kProductClamp) c.pf = 0.0;
    return c;
}

/// Three-state survey: mass on "frozen true" / "unfrozen" / "frozen false".
/// Clause-to-variable messages use the same shape with the additional
/// property that at most one frozen component is nonzero.
struct Survey3 {
    double st = 0.0;
    double si = 1.0;
    double sf = 0.0;

    double norm() const { return st + si + sf; }
    double polarized() const { return st + sf; }

    bool normalize() {
        const double z = norm();
        if (z <= 0.0) return false;
        st /= z;
        si /= z;
        sf /= z;
        return true;
    }

    /// Snaps sub-floor components to zero and renormalizes.
    void apply_floor() {
        if (st != 0.0 && st < kComponentFloor) st = 0.0;
        if (si != 0.0 && si < kComponentFloor) si = 0.0;
        if (sf != 0.0 && sf < kComponentFloor) sf = 0.0;
        normalize();
    }

    Survey3 swapped() const { return {sf, si, st}; }

    friend bool operator==(const Survey3&, const Survey3&) = default;
};

/// Fusion product of two surveys: agreeing frozen masses reinforce, the
/// unfrozen mass is absorbed by either side, and conflicting frozen masses
/// drop out of the result. {0,1,0} is the identity; the operation is
/// commutative and associative.
inline Survey3 survey_product(const Survey3& a, const Survey3& b) {
    Survey3 c{a.st * b.st + a.si * b.st + a.st * b.si,
              a.si * b.si,
              a.sf * b.sf + a.si * b.sf + a.sf * b.si};
    if (c.st < kProductClamp) c.st = 0.0;
    if (c.si < kProductClamp) c.si = 0.0;
    if (c.sf < kProductClamp) c.sf = 0.0;
    return c;
}

}  // namespace cavsat
