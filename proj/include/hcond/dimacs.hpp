#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "hcond/cnf.hpp"

namespace hcond::dimacs {

/// Reads `p cnf <vars> <clauses>` followed by 0-terminated clauses. Lines starting
/// with `c` are comments. Clauses may span lines.
inline CnfFormula read(std::istream& in) {
    std::string line;
    bool have_header = false;
    long declared_clauses = 0;
    CnfFormula f;
    std::vector<Literal> pending;
    long seen = 0;
    while (std::getline(in, line)) {
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == 'c' || line[first] == '%') continue;
        std::istringstream iss(line);
        if (line[first] == 'p') {
            std::string p, fmt;
            long nv = -1;
            iss >> p >> fmt >> nv >> declared_clauses;
            if (fmt != "cnf" || nv < 0 || declared_clauses < 0 || !iss)
                throw Error(Errc::ParseError, "bad header: " + line);
            f = CnfFormula(static_cast<Var>(nv));
            have_header = true;
            continue;
        }
        if (!have_header) throw Error(Errc::ParseError, "clause before header");
        long code;
        while (iss >> code) {
            if (code == 0) {
                f.add(Clause(std::move(pending)));
                pending.clear();
                ++seen;
            } else {
                pending.push_back(Literal::from_dimacs(code));
            }
        }
        if (!iss.eof()) throw Error(Errc::ParseError, "unexpected token in: " + line);
    }
    if (!have_header) throw Error(Errc::ParseError, "missing header");
    if (!pending.empty()) throw Error(Errc::ParseError, "last clause not 0-terminated");
    if (seen != declared_clauses)
        throw Error(Errc::ParseError, "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                          std::to_string(seen));
    return f;
}

inline CnfFormula read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, "cannot open " + path);
    return read(in);
}

inline CnfFormula parse(const std::string& text) {
    std::istringstream in(text);
    return read(in);
}

inline void write_clause(std::ostream& out, const Clause& c) {
    for (auto l : c) out << l.to_dimacs() << ' ';
    out << "0\n";
}

inline void write(std::ostream& out, const CnfFormula& f) {
    out << "p cnf " << f.num_vars() << ' ' << f.size() << '\n';
    for (const auto& c : f) write_clause(out, c);
}

inline std::string to_string(const CnfFormula& f) {
    std::ostringstream out;
    write(out, f);
    return out.str();
}

} // namespace hcond::dimacs
