#include "cavsat/dimacs.hpp"

#include <fstream>
#include <sstream>

namespace cavsat {

Formula parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    long long n_vars = -1;
    long long n_clauses = -1;

    // Header: first non-comment line must be "p cnf <vars> <clauses>".
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream hs(line);
        std::string p, fmt;
        if (!(hs >> p >> fmt >> n_vars >> n_clauses) || p != "p" || fmt != "cnf" ||
            n_vars < 0 || n_clauses < 0) {
            throw ParseError("malformed DIMACS header: \"" + line + "\"");
        }
        std::string extra;
        if (hs >> extra) throw ParseError("trailing tokens in DIMACS header");
        break;
    }
    if (n_vars < 0) throw ParseError("missing DIMACS header");

    std::vector<Clause> clauses;
    clauses.reserve(static_cast<std::size_t>(n_clauses));
    Clause current;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == 'c') continue;
        std::istringstream ls(line);
        long long lit;
        while (ls >> lit) {
            if (lit == 0) {
                clauses.push_back(std::move(current));
                current = Clause{};
                continue;
            }
            const long long v = lit > 0 ? lit : -lit;
            if (v > n_vars)
                throw ParseError("literal " + std::to_string(lit) + " out of range (n=" +
                                 std::to_string(n_vars) + ")");
            current.lits.push_back({static_cast<VarId>(v - 1), lit < 0});
        }
        std::string tail;
        ls.clear();
        if (ls >> tail) throw ParseError("unexpected token \"" + tail + "\" in clause body");
    }
    if (!current.lits.empty()) throw ParseError("clause missing terminating 0");
    if (static_cast<long long>(clauses.size()) != n_clauses)
        throw ParseError("header declares " + std::to_string(n_clauses) + " clauses, found " +
                         std::to_string(clauses.size()));
    return Formula(static_cast<VarId>(n_vars), std::move(clauses));
}

std::string write_dimacs(const Formula& f, const std::string& comment) {
    std::ostringstream out;
    if (!comment.empty()) {
        std::istringstream cs(comment);
        std::string cl;
        while (std::getline(cs, cl)) out << "c " << cl << "\n";
    }
    out << "p cnf " << f.n_vars() << " " << f.n_clauses() << "\n";
    for (const Clause& c : f.clauses()) {
        for (const Literal& lit : c.lits)
            out << (lit.negated ? -static_cast<long long>(lit.var) - 1
                                : static_cast<long long>(lit.var) + 1)
                << " ";
        out << "0\n";
    }
    return out.str();
}

Formula read_dimacs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open CNF file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dimacs(buf.str());
}

void write_dimacs_file(const Formula& f, const std::string& path, const std::string& comment) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << write_dimacs(f, comment);
}

}  // namespace cavsat
