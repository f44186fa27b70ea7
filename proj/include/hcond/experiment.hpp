#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcond/condense.hpp"
#include "hcond/dag.hpp"
#include "hcond/dimacs.hpp"
#include "hcond/oracles.hpp"

namespace hcond {

/// Writes `content` to `path` via a temporary file and a rename, so a reader
/// never sees a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::ParseError, "cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw Error(Errc::ParseError, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline nlohmann::json measures_json(const ProofMeasures& m) {
    return {{"length", m.length},   {"width", m.width},     {"clause_space", m.clause_space},
            {"var_space", m.var_space}, {"depth", m.depth}, {"refutes", m.refutes},
            {"homogeneous", m.homogeneous}};
}

inline nlohmann::json oracle_json(const std::string& measure, const OracleResult& r,
                                  const std::optional<std::string>& witness_path = std::nullopt) {
    nlohmann::json j{{"measure", measure}, {"status", to_string(r.status)}, {"states", r.states}};
    if (r.found()) j["value"] = r.value;
    if (!r.reason.empty()) j["reason"] = r.reason;
    if (witness_path) j["witness"] = *witness_path;
    return j;
}

// ---------------------------------------------------------------------------
// Width/space trade-off scan

struct TradeoffPoint {
    std::size_t width = 0;
    OracleResult::Status status = OracleResult::Status::Inconclusive;
    std::size_t space = 0;
};

/// min_space under each width cap in [w_lo, w_hi]. Every found witness is
/// re-verified against the cap and the claimed space.
inline std::vector<TradeoffPoint> tradeoff_scan(const CnfFormula& f, std::size_t w_lo, std::size_t w_hi,
                                                const SearchBudget& budget = {}) {
    std::vector<TradeoffPoint> out;
    for (std::size_t w = w_lo; w <= w_hi; ++w) {
        auto r = min_space(f, w, budget);
        if (r.found()) {
            auto m = verify(f, *r.witness, false);
            if (m.width > w || m.clause_space != r.value)
                throw Error(Errc::InternalInvariant, "space oracle witness disagrees with its claim at width " +
                                                         std::to_string(w));
        }
        out.push_back({w, r.status, r.value});
    }
    return out;
}

/// True iff the found space values never increase as the width cap grows.
inline bool is_monotone(const std::vector<TradeoffPoint>& curve) {
    std::optional<std::size_t> prev;
    for (const auto& p : curve) {
        if (p.status != OracleResult::Status::Found) continue;
        if (prev && p.space > *prev) return false;
        prev = p.space;
    }
    return true;
}

inline std::string tradeoff_csv(const std::vector<TradeoffPoint>& curve) {
    std::ostringstream out;
    out << "w,s\n";
    for (const auto& p : curve) {
        out << p.width << ',';
        if (p.status == OracleResult::Status::Found) out << p.space;
        else out << to_string(p.status);
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Condensation pipeline

enum class GraphKind { Matching, Xor2, Recycled };

inline GraphKind parse_graph_kind(const std::string& s) {
    if (s == "matching") return GraphKind::Matching;
    if (s == "xor2") return GraphKind::Xor2;
    if (s == "recycled") return GraphKind::Recycled;
    throw Error(Errc::ParseError, "unknown graph kind '" + s + "' (expected matching, xor2 or recycled)");
}

inline const char* to_string(GraphKind k) {
    switch (k) {
    case GraphKind::Matching: return "matching";
    case GraphKind::Xor2: return "xor2";
    case GraphKind::Recycled: return "recycled";
    }
    return "?";
}

struct CondensationSetup {
    std::string dag = "pyramid"; // pyramid | path
    unsigned height = 1;
    GraphKind graph = GraphKind::Matching;
    std::optional<BipartiteGraph> recycled; // used for GraphKind::Recycled when given
    std::uint64_t seed = 1;
    unsigned recycled_degree = 3;           // sampler degree for GraphKind::Recycled
    std::size_t recycled_right = 0;         // sampler right size; 0 picks 2 * N + 1
    unsigned sample_attempts = 200;
    SearchBudget budget;
};

struct CondensationRun {
    CnfFormula f;
    BipartiteGraph g;
    std::size_t r = 0;
    double c = 0;
    CnfFormula fg;
    Refutation oracle_proof;   // min-width refutation of F[G]
    Refutation input;          // its homogenized form
    ProofMeasures input_measures;
    CondensationResult result;
    ProofMeasures output_measures;
    std::uint64_t seed_used = 0;

    bool width_ok() const { return output_measures.width <= input_measures.width; }
    bool space_ok() const { return output_measures.clause_space <= result.stats.bound(); }
};

inline Dag make_dag(const std::string& kind, unsigned height) {
    if (kind == "pyramid") return pyramid_dag(height);
    if (kind == "path") return path_dag(height);
    throw Error(Errc::ParseError, "unknown dag kind '" + kind + "' (expected pyramid or path)");
}

namespace detail {

/// Min-width refutation of F[G], homogenized. Throws if the oracle is inconclusive.
inline std::pair<Refutation, Refutation> homogeneous_refutation(const CnfFormula& fg, const SearchBudget& budget) {
    auto w = min_width(fg, budget);
    if (!w.found()) throw Error(Errc::PreconditionViolated, std::string("width oracle: ") + to_string(w.status) + " " + w.reason);
    return {*w.witness, homogenize(fg, *w.witness)};
}

} // namespace detail

/// generate -> xorify -> certify -> oracle refutation -> homogenize -> condense -> verify.
/// The radius is r = 2w for the homogenized width w, so every clause fits the closure bound.
inline CondensationRun run_condensation(const CondensationSetup& setup) {
    CondensationRun run;
    run.f = pebbling_formula(make_dag(setup.dag, setup.height));
    const Var N = run.f.num_vars();

    auto attempt = [&](BipartiteGraph g, double c) -> bool {
        auto fg = xorify(run.f, g);
        auto [raw, hom] = detail::homogeneous_refutation(fg, setup.budget);
        auto m = verify(fg, hom);
        std::size_t r = std::max<std::size_t>(2 * m.width, 1);
        if (!is_boundary_expander(g, r, c).pass) return false;
        run.g = std::move(g);
        run.c = c;
        run.r = r;
        run.fg = std::move(fg);
        run.oracle_proof = std::move(raw);
        run.input = std::move(hom);
        run.input_measures = m;
        return true;
    };

    switch (setup.graph) {
    case GraphKind::Matching:
        if (!attempt(matching_graph(N), 1.0)) throw Error(Errc::InternalInvariant, "matching failed certification");
        break;
    case GraphKind::Xor2:
        if (!attempt(disjoint_xor_graph(N, 2), 2.0)) throw Error(Errc::InternalInvariant, "xor2 failed certification");
        break;
    case GraphKind::Recycled:
        if (setup.recycled) {
            if (!attempt(*setup.recycled, 2.0))
                throw Error(Errc::PreconditionViolated, "given graph is not a (2w, 2)-boundary expander");
            run.seed_used = setup.seed;
            break;
        } else {
            const std::size_t n = setup.recycled_right ? setup.recycled_right : 2 * static_cast<std::size_t>(N) + 1;
            bool ok = false;
            for (unsigned a = 0; a < setup.sample_attempts && !ok; ++a) {
                auto g = sample_expander(N, n, setup.recycled_degree, setup.seed + a);
                if (!g.has_overlap()) continue;
                ok = attempt(std::move(g), 2.0);
                if (ok) run.seed_used = setup.seed + a;
            }
            if (!ok) throw Error(Errc::PreconditionViolated, "no sampled recycled graph passed certification");
        }
        break;
    }

    CondensationContext ctx(run.f, CertifiedExpander(run.g, run.r, run.c));
    run.result = condense(ctx, run.input);
    run.output_measures = verify(run.f, run.result.proof);
    return run;
}

inline nlohmann::json condensation_report(const CondensationSetup& setup, const CondensationRun& run) {
    const auto& st = run.result.stats;
    nlohmann::json j;
    j["instance"] = {{"dag", setup.dag},
                     {"height", setup.height},
                     {"graph", to_string(setup.graph)},
                     {"left", run.g.left_size()},
                     {"right", run.g.right_size()},
                     {"degree", run.g.left_degree_bound()},
                     {"recycled", run.g.has_overlap()},
                     {"r", run.r},
                     {"c", run.c},
                     {"seed", run.seed_used}};
    j["input"] = measures_json(run.input_measures);
    j["output"] = measures_json(run.output_measures);
    j["w"] = st.width_in;
    j["s_in"] = st.space_in;
    j["s_out"] = st.space_out;
    j["bound"] = st.bound();
    j["ladder_count"] = st.ladders;
    j["max_ladder_depth"] = st.max_ladder_depth;
    j["max_backbone"] = st.max_backbone;
    j["max_inverse_image"] = st.max_inverse_size;
    j["assertions"] = {{"output_verifies", run.output_measures.refutes},
                       {"width_le_w", run.width_ok()},
                       {"space_le_bound", run.space_ok()},
                       {"output_homogeneous", run.output_measures.homogeneous}};
    j["traces"] = {{"formula", "f.cnf"},           {"xorified", "fg.cnf"},  {"graph", "graph.bip"},
                   {"oracle_proof", "oracle.res"}, {"input", "input.res"}, {"output", "output.res"}};
    j["note"] = "desk-scale run; asymptotic space lower bounds are not reproduced here";
    return j;
}

/// Writes every artifact of a run plus report.json into `dir`.
inline void write_condensation_artifacts(const std::filesystem::path& dir, const CondensationSetup& setup,
                                         const CondensationRun& run) {
    write_file_atomic(dir / "f.cnf", dimacs::to_string(run.f));
    write_file_atomic(dir / "fg.cnf", dimacs::to_string(run.fg));
    write_file_atomic(dir / "graph.bip", bip_format::to_string(run.g));
    write_file_atomic(dir / "oracle.res", trace::to_string(run.oracle_proof));
    write_file_atomic(dir / "input.res", trace::to_string(run.input));
    write_file_atomic(dir / "output.res", trace::to_string(run.result.proof));
    write_file_atomic(dir / "report.json", condensation_report(setup, run).dump(2) + "\n");
}

} // namespace hcond
