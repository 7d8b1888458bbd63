// Command-line front end: distance / reachable / connected / diameter / egd /
// gen, with deterministic human-readable or JSON output.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "matchjump/common.hpp"
#include "matchjump/dst_bridge.hpp"
#include "matchjump/fpt.hpp"
#include "matchjump/gadgets.hpp"
#include "matchjump/graph.hpp"
#include "matchjump/matching.hpp"
#include "matchjump/reconfig.hpp"
#include "matchjump/slack_routes.hpp"

using nlohmann::ordered_json;

namespace {

struct Options {
    std::string input;
    std::string method = "auto";
    bool witness = false;
    bool json = false;
    bool strict = false;
    std::size_t budget = 0;  // 0: fall back to env var / library default
    int threads = 1;
    int k = -1;
    std::string export_dst;
    std::string out_prefix;
    // gen setcover
    std::string spec_file;
    int universe = 0;
    std::vector<std::string> set_args;
    // gen vc
    std::string edges_arg;
    std::string graph_file;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mj::parse_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw mj::parse_error("cannot write file: " + path);
    out << text;
}

std::size_t effective_budget(const Options& opt) {
    if (opt.budget > 0) return opt.budget;
    if (const char* env = std::getenv("MATCHJUMP_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        std::fprintf(stderr, "warning: ignoring malformed MATCHJUMP_BUDGET\n");
    }
    return mj::kDefaultOracleBudget;
}

mj::Instance load_pair(const std::string& path) {
    mj::Instance inst = mj::parse_instance(read_file(path));
    if (!inst.ms || !inst.mt)
        throw mj::parse_error(path + ": instance needs both source and target matchings");
    return inst;
}

ordered_json edge_json(const mj::Graph& g, int e) {
    auto [u, v] = g.edge(e);
    return ordered_json::array({u + 1, v + 1});
}

ordered_json witness_json(const mj::Graph& g, const mj::ReconfigSequence& seq) {
    ordered_json arr = ordered_json::array();
    for (const mj::Exchange& x : seq.steps) {
        ordered_json step;
        step["remove"] = edge_json(g, x.remove_edge);
        step["add"] = edge_json(g, x.add_edge);
        arr.push_back(std::move(step));
    }
    return arr;
}

void print_witness_human(const mj::Graph& g, const mj::ReconfigSequence& seq) {
    std::printf("witness (%d steps):\n", seq.length());
    for (size_t i = 0; i < seq.steps.size(); ++i) {
        auto [ru, rv] = g.edge(seq.steps[i].remove_edge);
        auto [au, av] = g.edge(seq.steps[i].add_edge);
        std::printf("  %zu: remove (%d,%d) add (%d,%d)\n", i + 1, ru + 1, rv + 1, au + 1, av + 1);
    }
}

// Re-validates a witness against the instance before it is shown.
void self_check(const mj::Graph& g, const mj::Matching& ms, const mj::Matching& mt,
                const mj::ReconfigSequence& seq, long long answer) {
    mj::ValidationResult val = mj::validate_sequence(g, ms, mt, seq);
    mj::check(val.ok, "witness failed self-check: " + val.reason);
    mj::check(seq.length() == answer, "witness length differs from the reported answer");
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void emit(const Options& opt, const ordered_json& report, const Timer& timer) {
    if (opt.json) {
        std::printf("%s\n", report.dump(2).c_str());
        return;
    }
    for (const auto& [key, value] : report.items()) {
        if (key == "schema" || key == "flags" || key == "witness") continue;
        if (value.is_string())
            std::printf("%s: %s\n", key.c_str(), value.get<std::string>().c_str());
        else
            std::printf("%s: %s\n", key.c_str(), value.dump().c_str());
    }
    std::printf("time: %.1f ms\n", timer.ms());
}

ordered_json base_report(const char* command, const Options& opt) {
    ordered_json r;
    r["schema"] = 1;
    r["command"] = command;
    if (!opt.input.empty()) r["input"] = opt.input;
    return r;
}

void export_dst_file(const std::string& path, const mj::Graph& g, const mj::Matching& ms,
                     const mj::Matching& mt) {
    // Prune to edges some maximum matching uses, then build the reduction on
    // the surviving subgraph, mirroring the distance computation.
    std::vector<int> allowed = mj::allowed_edges(g);
    mj::Graph sub = g.edge_subgraph(allowed);
    auto translate = [&](const mj::Matching& m) {
        std::vector<int> old_to_new(static_cast<size_t>(g.m()), -1);
        for (size_t i = 0; i < allowed.size(); ++i) old_to_new[static_cast<size_t>(allowed[i])] = static_cast<int>(i);
        std::vector<int> ids;
        for (int e : m.edge_ids()) {
            mj::require(old_to_new[static_cast<size_t>(e)] >= 0,
                        "matching uses an edge outside every maximum matching");
            ids.push_back(old_to_new[static_cast<size_t>(e)]);
        }
        return mj::Matching(sub, ids);
    };
    mj::DstReduction red = mj::build_dst_instance(sub, translate(ms), translate(mt));
    std::ostringstream out;
    out << "# directed steiner tree instance (nodes 1-based; root is the extra node)\n";
    std::vector<char> is_term(static_cast<size_t>(red.instance.n), 0);
    for (int t : red.instance.terminals) is_term[static_cast<size_t>(t)] = 1;
    for (int v = 0; v < red.instance.n; ++v) {
        out << "node " << v + 1;
        if (v == red.instance.root) out << " root";
        if (is_term[static_cast<size_t>(v)]) out << " terminal";
        out << "\n";
    }
    static const char* kind_name[] = {"artificial", "special", "ordinary"};
    for (size_t a = 0; a < red.instance.arcs.size(); ++a) {
        const mj::SteinerArc& arc = red.instance.arcs[a];
        out << "arc " << arc.from + 1 << " " << arc.to + 1 << " " << arc.cost << " "
            << kind_name[static_cast<int>(red.arc_kind[a])] << "\n";
    }
    write_file(path, out.str());
}

int run_distance(const Options& opt) {
    Timer timer;
    mj::Instance inst = load_pair(opt.input);
    const mj::Graph& g = inst.g;
    const mj::Matching &ms = *inst.ms, &mt = *inst.mt;
    const bool bip = mj::bipartition(g).has_value();
    const std::size_t budget = effective_budget(opt);

    if (!opt.export_dst.empty()) {
        if (!bip) {
            std::fprintf(stderr, "error: the steiner export needs a bipartite graph\n");
            return 4;
        }
        export_dst_file(opt.export_dst, g, ms, mt);
    }

    bool infinite = false;
    long long answer = -1;
    std::optional<mj::ReconfigSequence> seq;
    std::string method, detail;
    std::size_t states = 0;

    auto eligible_slack = [&]() {
        return !mj::is_maximal(g, ms) || !mj::is_maximal(g, mt) ||
               mj::sym_diff_decompose(g, ms, mt).has_odd_path();
    };

    std::string how = opt.method;
    if (how == "auto") {
        if (ms == mt || eligible_slack())
            how = "slack";
        else if (bip)
            how = "fpt";
        else
            how = "oracle";
    }

    if (how == "slack") {
        if (ms == mt) {
            answer = 0;
            seq = mj::ReconfigSequence{ms, {}};
            method = "exact-nonmaximal";
            detail = "identical";
        } else if (eligible_slack()) {
            mj::RouteAnswer r = mj::distance_one_nonmaximal(g, ms, mt);
            answer = r.length;
            seq = std::move(r.seq);
            method = "exact-nonmaximal";
            detail = r.delta ? "greedy-parked" : "greedy";
        } else {
            std::fprintf(stderr,
                         "error: the slack method needs a non-maximal matching or an odd "
                         "difference path; use --method fpt or oracle\n");
            return 4;
        }
    } else if (how == "fpt") {
        if (!bip) {
            std::fprintf(stderr,
                         "error: the exact method needs a bipartite graph; rerun with "
                         "--method oracle to search exhaustively\n");
            return 4;
        }
        mj::DistanceResult r = mj::bipartite_distance(g, ms, mt, opt.threads);
        method = "fpt";
        detail = r.method;
        if (r.infinite)
            infinite = true;
        else {
            answer = r.distance;
            seq = std::move(r.seq);
        }
    } else {  // oracle
        mj::OracleOutcome r = mj::oracle_distance(g, ms, mt, budget);
        if (r.status == mj::OracleStatus::budget_exceeded)
            throw mj::budget_error("oracle search exceeded its state budget");
        method = "oracle";
        detail = "bfs";
        states = r.states;
        if (r.status == mj::OracleStatus::unreachable)
            infinite = true;
        else {
            answer = r.distance;
            seq = std::move(r.witness);
        }
    }

    ordered_json report = base_report("distance", opt);
    report["method"] = method;
    report["detail"] = detail;
    if (infinite)
        report["answer"] = "inf";
    else
        report["answer"] = answer;
    if (states > 0) report["states"] = states;
    if (opt.witness && !infinite && seq) {
        self_check(g, ms, mt, *seq, answer);
        report["witness"] = witness_json(g, *seq);
    }
    emit(opt, report, timer);
    if (!opt.json && opt.witness && !infinite && seq) print_witness_human(g, *seq);
    return infinite && opt.strict ? 1 : 0;
}

int run_reachable(const Options& opt) {
    Timer timer;
    mj::Instance inst = load_pair(opt.input);
    mj::ReachabilityOutcome r =
        mj::is_reachable(inst.g, *inst.ms, *inst.mt, effective_budget(opt));
    std::string method;
    if (r.method == "non-maximal")
        method = "exact-nonmaximal";
    else if (r.method == "bipartite-distance")
        method = "fpt";
    else if (r.method == "oracle")
        method = "oracle";
    else
        method = "formula";  // identical / blocked-cycle answers, no search needed

    ordered_json report = base_report("reachable", opt);
    report["method"] = method;
    report["detail"] = r.method;
    report["answer"] = r.reachable;
    emit(opt, report, timer);
    return 0;
}

int run_connected(const Options& opt) {
    Timer timer;
    mj::Instance inst = mj::parse_instance(read_file(opt.input));
    mj::require(opt.k >= 0, "connected needs --k");
    bool ans = mj::is_connected(inst.g, opt.k);
    ordered_json report = base_report("connected", opt);
    report["method"] = "formula";
    report["k"] = opt.k;
    report["answer"] = ans;
    emit(opt, report, timer);
    return 0;
}

int run_diameter(const Options& opt) {
    Timer timer;
    mj::Instance inst = mj::parse_instance(read_file(opt.input));
    mj::require(opt.k >= 0, "diameter needs --k");
    mj::DiameterOutcome r = mj::oracle_diameter(inst.g, opt.k, effective_budget(opt));
    if (r.status == mj::OracleStatus::budget_exceeded)
        throw mj::budget_error("diameter search exceeded its state budget");
    ordered_json report = base_report("diameter", opt);
    report["method"] = "oracle";
    report["k"] = opt.k;
    if (r.infinite)
        report["answer"] = "inf";
    else
        report["answer"] = r.diameter;
    report["states"] = r.states;
    emit(opt, report, timer);
    return 0;
}

int run_egd(const Options& opt) {
    Timer timer;
    mj::Instance inst = mj::parse_instance(read_file(opt.input));
    mj::EGDecomposition egd = mj::edmonds_gallai(inst.g);
    auto plus_one = [](const std::vector<int>& xs) {
        ordered_json arr = ordered_json::array();
        for (int x : xs) arr.push_back(x + 1);
        return arr;
    };
    ordered_json report = base_report("egd", opt);
    report["method"] = "formula";
    report["nu"] = egd.nu;
    report["d"] = plus_one(egd.d);
    report["a"] = plus_one(egd.a);
    report["c"] = plus_one(egd.c);
    emit(opt, report, timer);
    return 0;
}

mj::SetCoverInstance parse_setcover_args(const Options& opt) {
    mj::SetCoverInstance sc;
    if (!opt.spec_file.empty()) {
        // Lines: "n <count>" then one "s <item...>" line per set, 1-based.
        std::istringstream in(read_file(opt.spec_file));
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::istringstream ls(line);
            std::string tag;
            if (!(ls >> tag) || tag[0] == '#') continue;
            if (tag == "n") {
                if (!(ls >> sc.n)) throw mj::parse_error("setcover spec: bad n line");
            } else if (tag == "s") {
                std::vector<int> s;
                int u;
                while (ls >> u) s.push_back(u - 1);
                sc.sets.push_back(std::move(s));
            } else {
                throw mj::parse_error("setcover spec line " + std::to_string(lineno) +
                                      ": unknown tag '" + tag + "'");
            }
        }
    } else {
        sc.n = opt.universe;
        for (const std::string& arg : opt.set_args) {
            std::vector<int> s;
            std::istringstream ls(arg);
            std::string tok;
            while (std::getline(ls, tok, ',')) {
                try {
                    s.push_back(std::stoi(tok) - 1);
                } catch (const std::exception&) {
                    throw mj::parse_error("bad item in --set: '" + tok + "'");
                }
            }
            sc.sets.push_back(std::move(s));
        }
    }
    for (auto& s : sc.sets) std::sort(s.begin(), s.end());
    mj::validate_setcover(sc);
    return sc;
}

mj::Graph parse_vc_graph(const Options& opt) {
    if (!opt.graph_file.empty()) return mj::parse_instance(read_file(opt.graph_file)).g;
    std::vector<std::pair<int, int>> edges;
    int n = 0;
    std::istringstream in(opt.edges_arg);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        auto dash = tok.find('-');
        if (dash == std::string::npos) throw mj::parse_error("bad edge in --edges: '" + tok + "'");
        try {
            int a = std::stoi(tok.substr(0, dash));
            int b = std::stoi(tok.substr(dash + 1));
            mj::require(a >= 1 && b >= 1 && a != b, "edge endpoints must be distinct and 1-based");
            edges.emplace_back(a - 1, b - 1);
            n = std::max({n, a, b});
        } catch (const mj::precondition_error&) {
            throw;
        } catch (const std::exception&) {
            throw mj::parse_error("bad edge in --edges: '" + tok + "'");
        }
    }
    if (edges.empty()) throw mj::parse_error("gen vc needs at least one edge");
    return mj::Graph(n, edges);
}

ordered_json annotation_json(const mj::GadgetInstance& gi, const std::string& kind) {
    ordered_json ann;
    ann["schema"] = 1;
    ann["kind"] = kind;
    if (kind != "vc") {
        ann["universe"] = gi.cover.n;
        ordered_json sets = ordered_json::array();
        for (const auto& s : gi.cover.sets) {
            ordered_json one = ordered_json::array();
            for (int u : s) one.push_back(u + 1);
            sets.push_back(std::move(one));
        }
        ann["sets"] = std::move(sets);
        ann["d"] = gi.d;
        ann["f"] = gi.f;
        ann["L"] = gi.L;
        ann["L_formula"] = gi.L_formula;
        if (gi.Lp > 0) ann["L_extra"] = gi.Lp;
        ann["min_cover"] = mj::min_cover_size(gi.cover);
    } else {
        ann["hub"] = gi.t + 1;
    }
    ordered_json labels = ordered_json::array();
    for (const std::string& lab : gi.label) labels.push_back(lab);
    ann["labels"] = std::move(labels);
    ordered_json terms = ordered_json::array();
    for (size_t v = 0; v < gi.terminal.size(); ++v)
        if (gi.terminal[v]) terms.push_back(static_cast<int>(v) + 1);
    ann["terminals"] = std::move(terms);
    return ann;
}

int run_gen(const Options& opt, const std::string& kind) {
    mj::require(!opt.out_prefix.empty(), "gen needs --out <prefix>");
    mj::GadgetInstance gi;
    ordered_json ann;
    if (kind == "vc") {
        mj::Graph h = parse_vc_graph(opt);
        gi = mj::gen_vc(h);
        ann = annotation_json(gi, kind);
        ann["expected_distance"] = mj::expected_vc_distance(h);
        ann["expected_diameter"] = mj::expected_vc_diameter(h);
    } else {
        mj::SetCoverInstance sc = parse_setcover_args(opt);
        gi = kind == "setcover" ? mj::gen_setcover(sc) : mj::gen_setcover_nonmaximum(sc);
        ann = annotation_json(gi, kind);
    }
    const std::string inst_path = opt.out_prefix + ".inst";
    const std::string ann_path = opt.out_prefix + ".json";
    write_file(inst_path, mj::serialize_instance(gi.graph, &gi.m1, &gi.m2));
    write_file(ann_path, ann.dump(2) + "\n");
    std::printf("wrote %s (%d vertices, %d edges)\n", inst_path.c_str(), gi.graph.n(), gi.graph.m());
    std::printf("wrote %s\n", ann_path.c_str());
    return 0;
}

template <typename F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const mj::parse_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const mj::precondition_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const mj::budget_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 70;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shortest token-jumping transformations between equal-size matchings"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_flag("--json", opt.json, "emit a JSON report instead of text");
    };
    auto add_budget = [&](CLI::App* cmd) {
        cmd->add_option("--budget", opt.budget,
                        "state budget for exhaustive searches (default: MATCHJUMP_BUDGET or 10^7)");
    };

    CLI::App* dist = app.add_subcommand("distance", "shortest transformation length");
    dist->add_option("instance", opt.input, "instance file with graph and both matchings")
        ->required();
    dist->add_option("--method", opt.method, "auto | fpt | oracle | slack")
        ->check(CLI::IsMember({"auto", "fpt", "oracle", "slack"}));
    dist->add_flag("--witness", opt.witness, "include the step-by-step sequence");
    dist->add_flag("--strict", opt.strict, "exit 1 when the answer is infinite");
    dist->add_option("--threads", opt.threads, "worker threads for the side enumeration (default 1)");
    dist->add_option("--export-dst", opt.export_dst,
                     "also write the directed steiner reduction to this file");
    add_common(dist);
    add_budget(dist);

    CLI::App* reach = app.add_subcommand("reachable", "is the target reachable from the source");
    reach->add_option("instance", opt.input, "instance file with graph and both matchings")
        ->required();
    add_common(reach);
    add_budget(reach);

    CLI::App* conn = app.add_subcommand("connected", "is the size-k configuration graph connected");
    conn->add_option("graph", opt.input, "instance file (matchings optional)")->required();
    conn->add_option("--k", opt.k, "matching size")->required();
    add_common(conn);

    CLI::App* diam = app.add_subcommand("diameter", "largest pairwise distance at size k (exhaustive)");
    diam->add_option("graph", opt.input, "instance file (matchings optional)")->required();
    diam->add_option("--k", opt.k, "matching size")->required();
    add_common(diam);
    add_budget(diam);

    CLI::App* egd = app.add_subcommand("egd", "Edmonds-Gallai decomposition of the graph");
    egd->add_option("graph", opt.input, "instance file (matchings optional)")->required();
    add_common(egd);

    CLI::App* gen = app.add_subcommand("gen", "generate hardness-construction instances");
    gen->require_subcommand(1);
    CLI::App* gsc = gen->add_subcommand("setcover", "item/set gadget with maximum matchings");
    CLI::App* gscn = gen->add_subcommand("setcover-nonmax",
                                         "item/set gadget with maximal, non-maximum matchings");
    for (CLI::App* c : {gsc, gscn}) {
        c->add_option("--spec", opt.spec_file, "file with 'n <count>' and 's <item...>' lines");
        c->add_option("--universe", opt.universe, "number of items (with --set)");
        c->add_option("--set", opt.set_args, "comma-separated 1-based items; repeatable");
        c->add_option("--out", opt.out_prefix, "output prefix (.inst and .json)")->required();
    }
    CLI::App* gvc = gen->add_subcommand("vc", "per-edge 4-cycle gadget with hub vertex");
    gvc->add_option("--edges", opt.edges_arg, "comma-separated 1-based edges, e.g. 1-2,2-3");
    gvc->add_option("--graph", opt.graph_file, "instance file to take the graph from");
    gvc->add_option("--out", opt.out_prefix, "output prefix (.inst and .json)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (dist->parsed()) return guarded([&] { return run_distance(opt); });
    if (reach->parsed()) return guarded([&] { return run_reachable(opt); });
    if (conn->parsed()) return guarded([&] { return run_connected(opt); });
    if (diam->parsed()) return guarded([&] { return run_diameter(opt); });
    if (egd->parsed()) return guarded([&] { return run_egd(opt); });
    if (gen->parsed()) {
        std::string kind = gsc->parsed() ? "setcover" : gscn->parsed() ? "setcover-nonmax" : "vc";
        return guarded([&] { return run_gen(opt, kind); });
    }
    return 2;
}
