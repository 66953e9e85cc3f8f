#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cavsat/errors.hpp"

namespace cavsat {

using VarId = std::uint32_t;

struct Literal {
    VarId var = 0;
    bool negated = false;  // true: the clause is satisfied by the variable being false

    friend bool operator==(const Literal&, const Literal&) = default;
};

/// Disjunction of literals over distinct variables. Generated instances
/// always have width 3; simplification shortens clauses and DIMACS input
/// may carry other widths.
struct Clause {
    std::vector<Literal> lits;

    std::size_t width() const { return lits.size(); }
    friend bool operator==(const Clause&, const Clause&) = default;
};

/// Tri-state truth assignment.
class Assignment {
  public:
    enum class Value : std::uint8_t { False = 0, True = 1, Unset = 2 };

    Assignment() = default;
    explicit Assignment(std::size_t n) : values_(n, Value::Unset) {}

    std::size_t size() const { return values_.size(); }
    bool is_set(VarId v) const { return values_[v] != Value::Unset; }
    bool value(VarId v) const { return values_[v] == Value::True; }
    Value state(VarId v) const { return values_[v]; }
    void set(VarId v, bool b) { values_[v] = b ? Value::True : Value::False; }
    void unset(VarId v) { values_[v] = Value::Unset; }

    std::size_t n_set() const {
        std::size_t k = 0;
        for (Value v : values_) k += (v != Value::Unset);
        return k;
    }
    bool complete() const { return n_set() == size(); }

    friend bool operator==(const Assignment&, const Assignment&) = default;

  private:
    std::vector<Value> values_;
};

/// CNF formula plus factor-graph adjacency (for each variable, the list of
/// clauses it occurs in together with its position inside the clause).
class Formula {
  public:
    struct Occurrence {
        std::uint32_t clause = 0;
        std::uint32_t pos = 0;
        friend bool operator==(const Occurrence&, const Occurrence&) = default;
    };

    Formula() = default;
    Formula(VarId n_vars, std::vector<Clause> clauses);

    VarId n_vars() const { return n_vars_; }
    std::size_t n_clauses() const { return clauses_.size(); }
    const std::vector<Clause>& clauses() const { return clauses_; }
    const Clause& clause(std::size_t c) const { return clauses_[c]; }
    const std::vector<Occurrence>& occurrences(VarId v) const { return adjacency_[v]; }
    std::size_t degree(VarId v) const { return adjacency_[v].size(); }

    friend bool operator==(const Formula& a, const Formula& b) {
        return a.n_vars_ == b.n_vars_ && a.clauses_ == b.clauses_;
    }

  private:
    VarId n_vars_ = 0;
    std::vector<Clause> clauses_;
    std::vector<std::vector<Occurrence>> adjacency_;
};

/// Flat directed-edge view of the factor graph used by the message-passing
/// engines. The edges of clause c occupy ids [clause_begin[c],
/// clause_begin[c+1]); var_edges lists the same ids grouped by variable.
struct EdgeIndex {
    std::vector<std::uint32_t> clause_begin;  // size M+1
    std::vector<VarId> edge_var;              // size E
    std::vector<std::uint8_t> edge_negated;   // size E
    std::vector<std::uint32_t> var_begin;     // size N+1
    std::vector<std::uint32_t> var_edges;     // size E

    std::uint32_t n_edges() const { return static_cast<std::uint32_t>(edge_var.size()); }
    std::uint32_t clause_of(std::uint32_t edge) const;

    static EdgeIndex build(const Formula& f);
};

/// Uniform random 3-SAT instance: round(alpha*n) clauses, each over three
/// distinct variables with fair-coin signatures. Identical (n, alpha, seed)
/// reproduce the identical formula bit for bit.
Formula generate_random(VarId n, double alpha, std::uint64_t seed);

/// Truth of a single clause under a complete-enough assignment.
bool evaluate_clause(const Clause& c, const Assignment& a);

/// True iff every clause is satisfied (the legal-configuration test).
bool evaluate_formula(const Formula& f, const Assignment& a);

enum class SimplifyStatus { Reduced, Contradiction };

struct SimplifyResult {
    Formula formula;        // same variable space, reduced clause set
    Assignment assignment;  // input extended by unit propagation
    SimplifyStatus status = SimplifyStatus::Reduced;
    /// Maps each reduced clause back to its index in the input formula.
    std::vector<std::uint32_t> clause_origin;
};

/// Applies a partial assignment: satisfied clauses are dropped, falsified
/// literals removed, and unit clauses propagated to fixpoint. An empty
/// clause is reported as Contradiction in the status, not thrown.
SimplifyResult simplify(const Formula& f, const Assignment& partial);

}  // namespace cavsat
