#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcond/experiment.hpp"
#include "hcond/hcond.hpp"

namespace hcond::cli {
namespace {

using nlohmann::json;

struct Globals {
    std::uint64_t seed = 1;
    std::size_t budget_states = 2'000'000;
    double budget_seconds = 60;
    std::string out;

    SearchBudget budget() const {
        SearchBudget b;
        b.max_states = budget_states;
        b.time_limit_seconds = budget_seconds;
        return b;
    }
};

/// Writes to --out when given, else to stdout.
void emit(const Globals& g, std::ostream& out, const std::string& text) {
    if (g.out.empty()) out << text;
    else write_file_atomic(g.out, text);
}

VertexSet parse_set(const std::vector<Var>& xs) { return detail::normalized(xs); }

json set_json(const VertexSet& s) { return json(s); }

void add_globals(CLI::App& app, Globals& g) {
    app.add_option("--seed", g.seed, "RNG seed (u64)");
    app.add_option("--budget-states", g.budget_states, "State budget for oracle searches")->check(CLI::PositiveNumber);
    app.add_option("--budget-seconds", g.budget_seconds, "Time budget for oracle searches")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Output file (directory for experiment)");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Resolution proof workbench: pebbling formulas, XORification, expanders, condensation, oracles"};
    app.require_subcommand(1);
    Globals g;
    int status = kOk;

    // gen-pebbling
    std::string dag_kind = "pyramid";
    unsigned height = 1;
    std::string dag_out;
    auto* gen = app.add_subcommand("gen-pebbling", "Emit the pebbling formula of a DAG as DIMACS");
    gen->add_option("--dag", dag_kind, "pyramid or path")->check(CLI::IsMember({"pyramid", "path"}));
    gen->add_option("--height", height, "Pyramid height or path length")->check(CLI::PositiveNumber);
    gen->add_option("--dag-out", dag_out, "Also write the DAG file here");
    add_globals(*gen, g);
    gen->callback([&] {
        Dag d = make_dag(dag_kind, height);
        if (!dag_out.empty()) write_file_atomic(dag_out, dag_format::to_string(d));
        emit(g, out, dimacs::to_string(pebbling_formula(d)));
    });

    // xorify
    std::string cnf_path, bip_path, proof_path;
    unsigned disjoint = 0;
    auto* xo = app.add_subcommand("xorify", "Substitute XORs over a bipartite graph into a CNF");
    xo->add_option("formula", cnf_path, "DIMACS file")->required()->check(CLI::ExistingFile);
    auto* xo_graph = xo->add_option("graph", bip_path, "Bipartite graph file")->check(CLI::ExistingFile);
    xo->add_option("--disjoint", disjoint, "Use disjoint XOR of this arity instead of a graph file")
        ->check(CLI::PositiveNumber)
        ->excludes(xo_graph);
    add_globals(*xo, g);
    xo->callback([&] {
        auto f = dimacs::read_file(cnf_path);
        if (bip_path.empty() && !disjoint) throw CLI::RequiredError("graph or --disjoint");
        auto graph = disjoint ? disjoint_xor_graph(f.num_vars(), disjoint) : bip_format::read_file(bip_path);
        emit(g, out, dimacs::to_string(xorify(f, graph)));
    });

    // sample-expander
    std::size_t left = 0, right = 0, radius = 0;
    unsigned degree = 3;
    double expansion = 2;
    bool certify = false;
    auto* se = app.add_subcommand("sample-expander", "Sample a random bipartite graph of bounded left degree");
    se->add_option("--left", left, "Left size N")->required()->check(CLI::PositiveNumber);
    se->add_option("--right", right, "Right size n")->required()->check(CLI::PositiveNumber);
    se->add_option("--degree", degree, "Draws per left vertex d")->check(CLI::PositiveNumber);
    se->add_option("--r", radius, "With --certify: expansion radius");
    se->add_option("--c", expansion, "With --certify: expansion factor");
    se->add_flag("--certify", certify, "Exit 1 unless the sample is an (r, c)-boundary expander");
    add_globals(*se, g);
    se->callback([&] {
        auto graph = sample_expander(left, right, degree, g.seed);
        emit(g, out, bip_format::to_string(graph));
        if (certify) {
            if (radius < 1) throw CLI::RequiredError("--r");
            auto cert = is_boundary_expander(graph, radius, expansion);
            if (!cert.pass) status = kFail;
        }
    });

    // check-expander
    std::size_t guard = kDefaultRadiusGuard;
    auto* ce = app.add_subcommand("check-expander", "Exhaustively certify (r, c)-boundary expansion");
    ce->add_option("graph", bip_path, "Bipartite graph file")->required()->check(CLI::ExistingFile);
    ce->add_option("--r", radius, "Expansion radius")->required()->check(CLI::PositiveNumber);
    ce->add_option("--c", expansion, "Expansion factor");
    ce->add_option("--radius-guard", guard, "Refuse radii above this");
    add_globals(*ce, g);
    ce->callback([&] {
        auto cert = is_boundary_expander(bip_format::read_file(bip_path), radius, expansion, guard);
        json j{{"pass", cert.pass}, {"r", cert.r}, {"c", cert.c}};
        if (cert.witness) j["witness"] = *cert.witness;
        emit(g, out, j.dump() + "\n");
        if (!cert.pass) status = kFail;
    });

    // closure
    std::vector<Var> vset;
    auto* cl = app.add_subcommand("closure", "Compute the closure of a right vertex set");
    cl->add_option("graph", bip_path, "Bipartite graph file")->required()->check(CLI::ExistingFile);
    cl->add_option("--r", radius, "Certified radius")->required()->check(CLI::PositiveNumber);
    cl->add_option("--c", expansion, "Certified expansion factor");
    cl->add_option("--set", vset, "Right vertices")->delimiter(',');
    add_globals(*cl, g);
    cl->callback([&] {
        CertifiedExpander ge(bip_format::read_file(bip_path), radius, expansion);
        auto gamma = closure(ge, parse_set(vset));
        json j{{"set", set_json(parse_set(vset))}, {"closure", set_json(gamma)},
               {"kernel", set_json(kernel(ge.graph(), gamma))}};
        emit(g, out, j.dump() + "\n");
    });

    // peel
    std::vector<Var> uset, removed;
    auto* pe = app.add_subcommand("peel", "Peeling order of a left vertex set");
    pe->add_option("graph", bip_path, "Bipartite graph file")->required()->check(CLI::ExistingFile);
    pe->add_option("--set", uset, "Left vertices")->delimiter(',')->required();
    pe->add_option("--remove", removed, "Peel in G minus these right vertices")->delimiter(',');
    add_globals(*pe, g);
    pe->callback([&] {
        auto graph = remove(bip_format::read_file(bip_path), parse_set(removed));
        json pairs = json::array();
        for (auto [u, v] : peel_order(graph, parse_set(uset))) pairs.push_back({u, v});
        emit(g, out, json{{"order", pairs}}.dump() + "\n");
    });

    // verify
    bool no_weakening = false, partial = false, subsumption = false;
    auto* ve = app.add_subcommand("verify", "Check a proof trace and print its measures");
    ve->add_option("formula", cnf_path, "DIMACS file")->required()->check(CLI::ExistingFile);
    ve->add_option("proof", proof_path, "Proof trace")->required()->check(CLI::ExistingFile);
    ve->add_flag("--no-weakening", no_weakening, "Reject weakening steps");
    ve->add_flag("--partial", partial, "Accept derivations that do not reach the empty clause");
    ve->add_flag("--subsumption", subsumption, "Accept downloads of clauses subsumed by axioms (adds weakenings)");
    add_globals(*ve, g);
    ve->callback([&] {
        auto f = dimacs::read_file(cnf_path);
        auto p = trace::read_file(proof_path);
        if (subsumption) p = import_subsumption(f, p);
        try {
            auto m = check(f, p, {!no_weakening, !partial});
            emit(g, out, json{{"valid", true}, {"measures", measures_json(m)}}.dump() + "\n");
        } catch (const IllegalStep& e) {
            emit(g, out, json{{"valid", false}, {"step", e.index()}, {"reason", e.reason()}}.dump() + "\n");
            status = kFail;
        } catch (const Error& e) {
            if (e.code() != Errc::NotARefutation) throw;
            emit(g, out, json{{"valid", false}, {"reason", e.what()}}.dump() + "\n");
            status = kFail;
        }
    });

    // condense
    bool homogenize_first = false;
    std::string report_path;
    auto* co = app.add_subcommand("condense", "Turn a refutation of F[G] into a refutation of F");
    co->add_option("formula", cnf_path, "Original formula F (DIMACS)")->required()->check(CLI::ExistingFile);
    co->add_option("graph", bip_path, "Bipartite graph G")->required()->check(CLI::ExistingFile);
    co->add_option("proof", proof_path, "Refutation of F[G]")->required()->check(CLI::ExistingFile);
    co->add_option("--r", radius, "Certified radius (default: twice the proof width)");
    co->add_option("--c", expansion, "Certified expansion factor");
    co->add_flag("--homogenize", homogenize_first, "Homogenize a weakening-free input first");
    co->add_option("--report", report_path, "Write the JSON report here");
    add_globals(*co, g);
    co->callback([&] {
        auto f = dimacs::read_file(cnf_path);
        auto graph = bip_format::read_file(bip_path);
        auto p = trace::read_file(proof_path);
        auto fg = xorify(f, graph);
        if (homogenize_first) p = homogenize(fg, p);
        auto m = verify(fg, p);
        std::size_t r = radius ? radius : std::max<std::size_t>(2 * m.width, 1);
        CondensationContext ctx(f, CertifiedExpander(graph, r, expansion));
        auto res = condense(ctx, p);
        emit(g, out, trace::to_string(res.proof));
        const auto& st = res.stats;
        json rep{{"w", st.width_in},        {"s_in", st.space_in},          {"s_out", st.space_out},
                 {"width_out", st.width_out}, {"bound", st.bound()},        {"ladder_count", st.ladders},
                 {"max_ladder_depth", st.max_ladder_depth}, {"r", r}, {"c", expansion}};
        if (!report_path.empty()) write_file_atomic(report_path, rep.dump(2) + "\n");
        else err << rep.dump() << "\n";
        if (st.space_out > st.bound() || st.width_out > st.width_in) status = kFail;
    });

    // oracle
    std::string measure = "width", witness_path;
    std::optional<std::size_t> width_cap;
    auto* orc = app.add_subcommand("oracle", "Exact minimal width, space or depth by exhaustive search");
    orc->add_option("formula", cnf_path, "DIMACS file")->required()->check(CLI::ExistingFile);
    orc->add_option("--measure", measure, "width, space, space-dfs or depth")
        ->check(CLI::IsMember({"width", "space", "space-dfs", "depth"}));
    orc->add_option("--width-cap", width_cap, "Restrict clause width (space and depth)");
    orc->add_option("--witness", witness_path, "Write the witness trace here");
    add_globals(*orc, g);
    orc->callback([&] {
        auto f = dimacs::read_file(cnf_path);
        OracleResult r;
        if (measure == "width") r = min_width(f, g.budget());
        else if (measure == "space") r = min_space(f, width_cap, g.budget());
        else if (measure == "space-dfs") r = min_space_dfs(f, width_cap, g.budget());
        else r = min_depth(f, width_cap, g.budget());
        std::optional<std::string> wp;
        if (r.witness && !witness_path.empty()) {
            write_file_atomic(witness_path, trace::to_string(*r.witness));
            wp = witness_path;
        }
        emit(g, out, oracle_json(measure, r, wp).dump() + "\n");
        if (!r.found()) status = kFail;
    });

    // experiment
    auto* ex = app.add_subcommand("experiment", "Run an end-to-end experiment");
    ex->require_subcommand(1);

    CondensationSetup setup;
    std::string graph_kind = "matching";
    auto* exc = ex->add_subcommand("condensation", "generate, xorify, certify, refute, condense, verify");
    exc->add_option("--dag", setup.dag, "pyramid or path")->check(CLI::IsMember({"pyramid", "path"}));
    exc->add_option("--height", setup.height, "Pyramid height or path length")->check(CLI::PositiveNumber);
    exc->add_option("--graph", graph_kind, "matching, xor2 or recycled")
        ->check(CLI::IsMember({"matching", "xor2", "recycled"}));
    exc->add_option("--graph-file", bip_path, "Recycled graph to use instead of sampling")->check(CLI::ExistingFile);
    exc->add_option("--degree", setup.recycled_degree, "Sampler degree for recycled graphs")->check(CLI::PositiveNumber);
    exc->add_option("--right", setup.recycled_right, "Sampler right size for recycled graphs");
    add_globals(*exc, g);
    exc->callback([&] {
        setup.graph = parse_graph_kind(graph_kind);
        setup.seed = g.seed;
        setup.budget = g.budget();
        if (!bip_path.empty()) setup.recycled = bip_format::read_file(bip_path);
        auto run = run_condensation(setup);
        auto rep = condensation_report(setup, run);
        if (!g.out.empty()) write_condensation_artifacts(g.out, setup, run);
        out << rep.dump(2) << "\n";
        for (auto& [k, v] : rep["assertions"].items())
            if (!v.get<bool>()) status = kFail;
    });

    std::size_t w_lo = 1, w_hi = 0;
    unsigned xor_arity = 0;
    auto* ext = ex->add_subcommand("tradeoff", "Minimal space under each width cap");
    ext->add_option("formula", cnf_path, "DIMACS file (default: generated from --dag/--height)")
        ->check(CLI::ExistingFile);
    ext->add_option("--dag", dag_kind, "pyramid or path")->check(CLI::IsMember({"pyramid", "path"}));
    ext->add_option("--height", height, "Pyramid height or path length")->check(CLI::PositiveNumber);
    ext->add_option("--xor", xor_arity, "Apply disjoint XOR of this arity to the generated formula");
    ext->add_option("--w-min", w_lo, "Smallest width cap");
    ext->add_option("--w-max", w_hi, "Largest width cap (default: number of variables)");
    add_globals(*ext, g);
    ext->callback([&] {
        CnfFormula f = cnf_path.empty() ? pebbling_formula(make_dag(dag_kind, height)) : dimacs::read_file(cnf_path);
        if (xor_arity) f = xorify(f, disjoint_xor_graph(f.num_vars(), xor_arity));
        if (!w_hi) w_hi = f.num_vars();
        auto curve = tradeoff_scan(f, w_lo, w_hi, g.budget());
        auto csv = tradeoff_csv(curve);
        if (g.out.empty()) out << csv;
        else {
            std::filesystem::path dir = g.out;
            write_file_atomic(dir / "formula.cnf", dimacs::to_string(f));
            write_file_atomic(dir / "tradeoff.csv", csv);
        }
        if (!is_monotone(curve)) status = kFail;
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == Errc::ParseError ? kUsage : kFail;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFail;
    }
    return status;
}

} // namespace hcond::cli
