#include "hedra/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "hedra/graphon.hpp"
#include "hedra/io.hpp"
#include "hedra/obstructions.hpp"
#include "hedra/property.hpp"
#include "hedra/repairs.hpp"
#include "hedra/rules.hpp"

namespace hedra {

int env_thread_cap() {
    if (const char* env = std::getenv("HEDRA_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotFound = 2;
constexpr int kExitIo = 3;

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return os.str();
}

Property property_by_name(const std::string& name) {
    if (name.size() > 4 && name.substr(name.size() - 4) == ".hgp") return load_hgp(name);
    return builtin_property(name);
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

struct GenOptions {
    std::string kind;
    int m = 100;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    int n = 100;
    std::string graphon_name = "half";
    std::string out_path;
    std::string out0_path;
};

int cmd_gen(const GenOptions& opt, std::ostream& out) {
    out << "cmd=gen kind=" << opt.kind << " m=" << opt.m << " sigma=" << fmt(opt.sigma)
        << " seed=" << opt.seed << "\n";
    CorruptionSpec spec{opt.m, opt.sigma, opt.seed};
    std::pair<Hypergraph, Hypergraph> pair = [&] {
        if (opt.kind == "order") return gen_corrupted_order(spec);
        if (opt.kind == "leq3") return gen_leq3(spec);
        if (opt.kind == "3uniform") return gen_3uniform(spec);
        throw CLI::ValidationError("gen", "unknown kind: " + opt.kind);
    }();
    if (!opt.out0_path.empty()) save_hgr(opt.out0_path, pair.first);
    save_hgr(opt.out_path, pair.second);
    out << "n=" << pair.second.size() << " wrote=" << opt.out_path << "\n";
    return kExitOk;
}

int cmd_gen_graphon(const GenOptions& opt, std::ostream& out) {
    out << "cmd=gen kind=graphon graphon=" << opt.graphon_name << " n=" << opt.n
        << " seed=" << opt.seed << "\n";
    Graphon p = opt.graphon_name.size() > 4 &&
                        opt.graphon_name.substr(opt.graphon_name.size() - 4) == ".gwn"
                    ? load_gwn(opt.graphon_name)
                    : Graphon::named(opt.graphon_name);
    GraphonSample s = sample_graphon_graph(p, opt.n, opt.seed);
    save_hgr(opt.out_path, s.graph);
    out << "n=" << opt.n << " wrote=" << opt.out_path << "\n";
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"hedra: testing and repair of hereditary hypergraph properties"};
    app.require_subcommand(1);

    // gen
    GenOptions gen;
    auto* cgen = app.add_subcommand("gen", "generate corrupted instances");
    cgen->add_option("kind", gen.kind, "order|leq3|3uniform|graphon")->required();
    cgen->add_option("--m", gen.m, "instance size parameter");
    cgen->add_option("--sigma", gen.sigma, "per-edge flip probability");
    cgen->add_option("--seed", gen.seed, "rng seed");
    cgen->add_option("--n", gen.n, "vertex count (graphon)");
    cgen->add_option("--graphon", gen.graphon_name, "named graphon or .gwn path");
    cgen->add_option("-o,--out", gen.out_path, "output HGR path")->required();
    cgen->add_option("--out0", gen.out0_path, "also write the uncorrupted instance");

    // test
    std::string test_input, test_property, test_mode = "exact";
    int test_n = 1;
    std::uint64_t test_samples = 1000, test_seed = 0;
    auto* ctest = app.add_subcommand("test", "local satisfaction of a property");
    ctest->add_option("input", test_input)->required();
    ctest->add_option("--property", test_property, "builtin name or .hgp path")->required();
    ctest->add_option("--N", test_n, "sample subgraph size")->required();
    ctest->add_option("--mode", test_mode, "exact|mc");
    ctest->add_option("--samples", test_samples);
    ctest->add_option("--seed", test_seed);

    // dist
    std::string dist_a, dist_b;
    auto* cdist = app.add_subcommand("dist", "distance between two hypergraphs");
    cdist->add_option("a", dist_a)->required();
    cdist->add_option("b", dist_b)->required();

    // repair
    std::string repair_algo, repair_input, repair_output;
    int repair_train = 30;
    std::uint64_t repair_seed = 0;
    auto* crepair = app.add_subcommand("repair", "repair a corrupted instance");
    crepair->add_option("--algo", repair_algo, "order|bipartite")->required();
    crepair->add_option("--train", repair_train, "training set size");
    crepair->add_option("--seed", repair_seed);
    crepair->add_option("input", repair_input)->required();
    crepair->add_option("-o,--out", repair_output, "output HGR path");

    // rule
    std::string rule_name, rule_input, rule_output, rule_property, rule_anchors;
    int rule_entail = -1;
    std::uint64_t rule_ceiling = 1ull << 26;
    bool rule_apply = false;
    auto* crule = app.add_subcommand("rule", "apply or verify a local rule");
    crule->add_option("--name", rule_name)->required();
    crule->add_flag("--apply", rule_apply, "apply to an input graph");
    crule->add_option("--anchors", rule_anchors, "comma-separated anchor vertices");
    crule->add_option("--entail-upto", rule_entail, "exhaustive entailment bound on |V|");
    crule->add_option("--property", rule_property, "property for entailment");
    crule->add_option("--ceiling", rule_ceiling, "enumeration ceiling");
    crule->add_option("input", rule_input);
    crule->add_option("-o,--out", rule_output);

    // obstruct
    std::string ob_input, ob_kind, ob_rule = "identity-copy";
    int ob_anchors = 0;
    std::uint64_t ob_budget = 10000000, ob_seed = 0;
    auto* cob = app.add_subcommand("obstruct", "search for local-repair obstructions");
    cob->add_option("input", ob_input)->required();
    cob->add_option("--kind", ob_kind, "pair|quad|nine")->required();
    cob->add_option("--anchors", ob_anchors, "anchor count, sampled by seed")->required();
    cob->add_option("--budget", ob_budget, "probe budget");
    cob->add_option("--seed", ob_seed);
    cob->add_option("--rule", ob_rule, "rule under attack");

    // ramsey
    std::string ram_input;
    int ram_target = 3;
    auto* cram = app.add_subcommand("ramsey", "monochromatic subset search");
    cram->add_option("input", ram_input)->required();
    cram->add_option("--target", ram_target)->required();

    // graphon
    std::string go_name = "half", go_out;
    int go_sample = 0, go_cells = 0;
    double go_sigma = 0.1;
    std::uint64_t go_density = 0, go_seed = 0;
    auto* cgo = app.add_subcommand("graphon", "graphon sampling, density, repair");
    cgo->add_option("--graphon", go_name, "named graphon or .gwn path");
    cgo->add_option("--sample", go_sample, "sample a graph on n vertices");
    cgo->add_option("--density", go_density, "triangle density sample count");
    cgo->add_option("--repair", go_cells, "repair with this cell count");
    cgo->add_option("--sigma", go_sigma, "repair threshold");
    cgo->add_option("--seed", go_seed);
    cgo->add_option("-o,--out", go_out, "output HGR path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (cgen->parsed()) {
            if (gen.kind == "graphon") return cmd_gen_graphon(gen, out);
            return cmd_gen(gen, out);
        }
        if (ctest->parsed()) {
            Hypergraph g = load_hgr(test_input);
            Property p = property_by_name(test_property);
            out << "cmd=test property=" << p.name() << " N=" << test_n << " mode=" << test_mode
                << " samples=" << test_samples << " seed=" << test_seed << "\n";
            if (test_mode == "exact") {
                auto r = local_satisfaction_exact(p, g, test_n);
                out << "satisfaction=" << fmt(r.value) << " subsets=" << r.samples << "\n";
            } else if (test_mode == "mc") {
                auto r = local_satisfaction_mc(p, g, test_n, test_samples, test_seed,
                                               env_thread_cap());
                out << "satisfaction=" << fmt(r.value) << " stderr=" << fmt(r.std_error)
                    << " samples=" << r.samples << "\n";
            } else {
                err << "unknown mode: " << test_mode << "\n";
                return kExitUsage;
            }
            return kExitOk;
        }
        if (cdist->parsed()) {
            Hypergraph a = load_hgr(dist_a), b = load_hgr(dist_b);
            out << "cmd=dist a=" << dist_a << " b=" << dist_b << "\n";
            out << "distance=" << fmt(distance(a, b)) << "\n";
            return kExitOk;
        }
        if (crepair->parsed()) {
            Hypergraph g = load_hgr(repair_input);
            out << "cmd=repair algo=" << repair_algo << " train=" << repair_train
                << " seed=" << repair_seed << "\n";
            if (repair_algo == "order") {
                auto r = repair_total_order(g, repair_train, repair_seed);
                out << "training_total_order=" << (r.training_total_order ? 1 : 0) << "\n";
                out << "edit_fraction=" << fmt(r.edit_fraction) << "\n";
                out << "leftover=" << r.leftover_count << "\n";
                out << "exact_bucketed=" << r.exact_bucket_count << "\n";
                if (!repair_output.empty()) save_hgr(repair_output, r.repaired);
            } else if (repair_algo == "bipartite") {
                auto r = repair_bipartite(g, repair_train, repair_seed);
                out << "edit_fraction=" << fmt(r.edit_fraction) << "\n";
                if (!repair_output.empty()) save_hgr(repair_output, r.repaired);
            } else {
                err << "unknown repair algorithm: " << repair_algo << "\n";
                return kExitUsage;
            }
            return kExitOk;
        }
        if (crule->parsed()) {
            out << "cmd=rule name=" << rule_name << "\n";
            if (rule_apply) {
                if (rule_input.empty() || rule_output.empty()) {
                    err << "rule --apply needs an input and -o output\n";
                    return kExitUsage;
                }
                Hypergraph g = load_hgr(rule_input);
                std::vector<int> anchors = parse_int_list(rule_anchors);
                Palette pal = g.palette();
                LocalRule rule = builtin_rule(rule_name, &pal,
                                              static_cast<int>(anchors.size()));
                Hypergraph repaired = apply_rule(rule, g, Morphism(g.size(), anchors));
                save_hgr(rule_output, repaired);
                out << "n=" << repaired.size() << " wrote=" << rule_output << "\n";
                return kExitOk;
            }
            if (rule_entail >= 0) {
                if (rule_property.empty()) {
                    err << "rule --entail-upto needs --property\n";
                    return kExitUsage;
                }
                Property p = property_by_name(rule_property);
                Palette pal = p.palette();
                LocalRule rule = builtin_rule(rule_name, &pal,
                                              rule_anchors.empty()
                                                  ? 0
                                                  : static_cast<int>(parse_int_list(rule_anchors).size()));
                auto r = verify_entailment_upto(rule, p, rule_entail, rule_ceiling);
                if (r.refused) {
                    out << "refused=1 enumeration_count=" << r.refused_count << "\n";
                    return kExitUsage;
                }
                out << "checked=" << r.checked << "\n";
                if (r.counterexample) {
                    out << "counterexample_v=" << r.counterexample_v << "\n";
                    write_hgr(out, *r.counterexample);
                    return kExitOk;
                }
                out << "counterexample=none\n";
                return kExitOk;
            }
            err << "rule: nothing to do (use --apply or --entail-upto)\n";
            return kExitUsage;
        }
        if (cob->parsed()) {
            Hypergraph g = load_hgr(ob_input);
            out << "cmd=obstruct kind=" << ob_kind << " anchors=" << ob_anchors
                << " budget=" << ob_budget << " seed=" << ob_seed << " rule=" << ob_rule << "\n";
            Rng rng(ob_seed);
            std::vector<int> anchors = rng.sample_distinct(g.size(), ob_anchors);
            Palette pal = g.palette();
            LocalRule rule = builtin_rule(ob_rule, &pal, ob_anchors);
            if (ob_kind == "pair") {
                auto rep = defeat_rule_order(g, rule, Morphism(g.size(), anchors));
                if (!rep) {
                    out << "found=0\n";
                    return kExitNotFound;
                }
                out << "found=1 violates_total_order=" << (rep->violates_total_order ? 1 : 0)
                    << "\n";
                out << to_text(rep->obstruction);
                return kExitOk;
            }
            Hypergraph repaired = apply_rule(rule, g, Morphism(g.size(), anchors));
            SearchOutcome so = ob_kind == "quad"
                                   ? find_inconsistent_quad(g, repaired, anchors, ob_budget, ob_seed)
                                   : find_inconsistent_nine(g, repaired, anchors, ob_budget, ob_seed);
            out << "probes=" << so.probes << "\n";
            if (!so.report) {
                out << "found=0 budget_exhausted=" << (so.budget_exhausted ? 1 : 0) << "\n";
                return kExitNotFound;
            }
            out << "found=1\n" << to_text(*so.report);
            return kExitOk;
        }
        if (cram->parsed()) {
            Hypergraph g = load_hgr(ram_input);
            out << "cmd=ramsey target=" << ram_target << "\n";
            auto w = find_monochromatic(g, ram_target);
            if (!w) {
                out << "found=0\n";
                return kExitNotFound;
            }
            out << "found=1 witness";
            for (int v : *w) out << ' ' << v;
            out << "\n";
            return kExitOk;
        }
        if (cgo->parsed()) {
            Graphon p = go_name.size() > 4 && go_name.substr(go_name.size() - 4) == ".gwn"
                            ? load_gwn(go_name)
                            : Graphon::named(go_name);
            out << "cmd=graphon graphon=" << go_name << " seed=" << go_seed << "\n";
            if (go_density > 0) {
                auto d = triangle_density(p, go_density, go_seed);
                out << "triangle_density=" << fmt(d.value) << " stderr=" << fmt(d.std_error)
                    << " samples=" << d.samples << "\n";
            }
            if (go_sample > 0) {
                GraphonSample s = sample_graphon_graph(p, go_sample, go_seed);
                if (go_cells > 0) {
                    auto r = repair_triangle_free(s.graph, s.colors, p, go_cells, go_sigma,
                                                  mix_seed(go_seed, 1));
                    out << "edit_fraction=" << fmt(r.edit_fraction) << "\n";
                    out << "residual_triangles=" << r.residual_triangles << "\n";
                    out << "zeta_triangle_sum=" << fmt(r.zeta_sum) << "\n";
                    if (!go_out.empty()) save_hgr(go_out, r.repaired);
                } else if (!go_out.empty()) {
                    save_hgr(go_out, s.graph);
                    out << "n=" << go_sample << " wrote=" << go_out << "\n";
                }
            }
            return kExitOk;
        }
    } catch (const FormatError& e) {
        err << "format error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
    err << "no subcommand\n";
    return kExitUsage;
}

} // namespace hedra
