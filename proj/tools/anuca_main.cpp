// Command-line front end: loads rule files, runs engine/analysis
// operations, and emits deterministic JSON reports on stdout. Human
// summaries (including wall time and thread count) go to stderr so that
// reports are byte-identical across runs and thread counts.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

#include "anuca/json_io.hpp"

using namespace anuca;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 0;
    int threads = 1;
    std::uint64_t cap = 0;        // 0 = default / env
    std::uint64_t table_cap = 0;  // 0 = default
    bool verify = false;

    Limits limits() const {
        Limits l;
        if (cap) l.pattern_cap = cap;
        if (table_cap) l.table_cap = table_cap;
        l.threads = threads;
        return l;
    }
};

int finish(const std::string& command, const Json& report, const GlobalOpts& opts,
           std::chrono::steady_clock::time_point start, int code,
           const std::string& summary) {
    Json out = report;
    out["schema"] = "report_v1";
    out["command"] = command;
    Limits l = opts.limits();
    out["caps_used"] = Json{{"pattern_cap", l.pattern_cap}, {"table_cap", l.table_cap}};
    std::cout << out.dump(2) << "\n";
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::cerr << "anuca " << command << ": " << summary << " (exit " << code << ", "
              << ms << " ms, " << opts.threads << " thread"
              << (opts.threads == 1 ? "" : "s") << ")\n";
    return code;
}

std::vector<Symbol> parse_backgrounds(const std::string& text, int alphabet) {
    std::vector<Symbol> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string part =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        int v = std::stoi(part);
        if (v < 0 || v >= alphabet) throw Error("background symbol out of range");
        out.push_back(static_cast<Symbol>(v));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<Cell> parse_cells_list(const std::string& text) {
    std::vector<Cell> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t semi = text.find(';', pos);
        std::string part =
            text.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
        out.push_back(parse_cell_spec(part));
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    return out;
}

// certificate json + optional replay under --verify
bool attach_certificate(Json& slot, const RuleConfig& config, const Certificate& cert,
                        const GlobalOpts& opts, bool& verify_ok) {
    slot = certificate_json(cert);
    if (opts.verify) {
        bool ok = replay_certificate(config, cert, opts.limits());
        slot["verified"] = ok;
        if (!ok) verify_ok = false;
        return ok;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact analysis of asynchronous non-uniform cellular automata on Z^d"};
    app.require_subcommand(1);

    GlobalOpts opts;
    app.add_option("--seed", opts.seed, "seed for sampled checks (default 0)");
    app.add_option("--threads", opts.threads, "worker threads for search loops")
        ->check(CLI::Range(1, 256));
    app.add_option("--cap", opts.cap, "pattern enumeration cap (overrides ANUCA_CAP)");
    app.add_option("--table-cap", opts.table_cap, "materialized table cap");
    app.add_flag("--verify", opts.verify, "replay every emitted certificate");

    std::string rules_path, rules2_path, window_spec, box_spec, input_spec;
    std::string input_window_spec, cell_spec, cells_spec, backgrounds_spec, offsets_spec;
    std::string corpus_name;
    int max_radius = 3, radius = 0, trials = 16, window_radius = 3;
    int background = 0;
    bool uniform = false;

    auto add_rules = [&](CLI::App* cmd) {
        cmd->add_option("--rules", rules_path, "rule file (JSON)")->required();
    };

    CLI::App* simulate = app.add_subcommand("simulate", "apply the map on a window");
    add_rules(simulate);
    simulate->add_option("--window", window_spec, "output window lo..hi[,lo..hi]")
        ->required();
    simulate->add_option("--input", input_spec,
                         "packed digits over the input window, or cell=symbol;... pairs")
        ->required();
    simulate->add_option("--input-window", input_window_spec,
                         "box the packed input covers (default: the output window)");
    simulate->add_option("--background", background, "fill symbol outside the input");
    int steps = 1;
    bool render = false;
    simulate->add_option("--steps", steps, "iterate; later windows shrink to stay exact")
        ->check(CLI::PositiveNumber);
    simulate->add_flag("--render", render, "include a space-time text render (d=1)");

    CLI::App* compose_cmd = app.add_subcommand("compose", "compose two configurations");
    add_rules(compose_cmd);
    compose_cmd->add_option("--rules2", rules2_path, "inner rule file (applied first)")
        ->required();

    CLI::App* image = app.add_subcommand("image", "exact image of a window");
    add_rules(image);
    image->add_option("--window", window_spec, "window lo..hi[,lo..hi]")->required();

    CLI::App* surjectivity =
        app.add_subcommand("surjectivity", "scan for a missing image pattern");
    add_rules(surjectivity);
    surjectivity->add_option("--max-radius", max_radius, "largest window radius");

    CLI::App* collisions = app.add_subcommand("collisions", "search for equal-image pairs");
    add_rules(collisions);
    collisions->add_option("--max-radius", max_radius, "largest search radius");
    collisions->add_option("--backgrounds", backgrounds_spec,
                           "comma-separated background symbols (default: all)");

    CLI::App* stable = app.add_subcommand(
        "stable-injectivity", "collision search on s and its orbit-closure limits");
    add_rules(stable);
    stable->add_option("--max-radius", max_radius, "largest search radius");

    CLI::App* inverse = app.add_subcommand("inverse", "synthesize a left inverse");
    add_rules(inverse);
    inverse->add_option("--max-radius", max_radius, "largest inverse neighborhood radius");

    CLI::App* determining =
        app.add_subcommand("determining-radius", "image radius pinning down one cell");
    add_rules(determining);
    determining->add_option("--cell", cell_spec, "cell c[,c]")->required();
    determining->add_option("--max-radius", max_radius, "largest radius to try");

    CLI::App* periodize = app.add_subcommand("periodize", "apply the periodized map");
    add_rules(periodize);
    periodize->add_option("--box", box_spec, "box lo..hi[,lo..hi]")->required();
    periodize->add_option("--input", input_spec, "packed digits over the box")->required();

    CLI::App* psi_check =
        app.add_subcommand("psi-check", "materialize the periodized map, decide bijectivity");
    add_rules(psi_check);
    psi_check->add_option("--box", box_spec, "box lo..hi[,lo..hi]")->required();

    CLI::App* wrap_check =
        app.add_subcommand("wrap-check", "boundary rules agree with their reductions");
    add_rules(wrap_check);
    wrap_check->add_option("--box", box_spec, "box lo..hi[,lo..hi]")->required();
    wrap_check->add_option("--offsets", offsets_spec,
                           "boundary offset set as c;c;... (default: the memory)");

    CLI::App* post = app.add_subcommand("post-surjectivity", "lift probes at cells");
    add_rules(post);
    post->add_option("--cell", cell_spec, "probed cell (single-cell mode)");
    post->add_option("--cells", cells_spec, "cells c;c;... (uniform mode)");
    post->add_option("--radius", radius, "neighborhood radius (single-cell mode)");
    post->add_option("--max-radius", max_radius, "largest radius (uniform mode)");
    post->add_flag("--uniform", uniform, "find the smallest radius working at all cells");
    post->add_option("--trials", trials, "sampled inputs per cell");
    post->add_option("--window-radius", window_radius, "sampled input window radius");
    post->add_option("--background", background, "background fill symbol");

    CLI::App* corpus_cmd =
        app.add_subcommand("corpus", "run the builtin examples' golden battery");
    corpus_cmd->add_option("--name", corpus_name, "run a single builtin");

    // global options remain valid after the subcommand name
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    auto start = std::chrono::steady_clock::now();
    Limits limits = opts.limits();
    bool verify_ok = true;

    try {
        if (simulate->parsed()) {
            RuleConfig s = load_rule_file(rules_path);
            Box window = parse_box_spec(window_spec);
            Box input_window =
                input_window_spec.empty() ? window : parse_box_spec(input_window_spec);
            Pattern x = parse_pattern_spec(input_spec, s.dim, s.alphabet, input_window);
            if (background < 0 || background >= s.alphabet) {
                throw Error("background symbol out of range");
            }
            if (render && s.dim != 1) throw Error("--render needs dimension 1");

            // first step on the requested window, background-filled; later
            // steps shrink so every value is computed from known cells only
            Pattern current = apply_window_bg(s, window.cell_set(), x,
                                              static_cast<Symbol>(background));
            Json step_list = Json::array();
            std::vector<Pattern> trail{extend_pattern(
                x, input_window.cell_set(), static_cast<Symbol>(background))};
            step_list.push_back(Json{{"window", box_json(window)},
                                     {"output", packed_string(current.symbols)}});
            trail.push_back(current);
            for (int step = 2; step <= steps; ++step) {
                CellSet next = boundary_sets(current.support, s.memory).interior;
                if (next.empty()) break;
                current = apply_window(s, next,
                                       restrict_pattern(current, minkowski(next, s.memory)));
                step_list.push_back(
                    Json{{"window",
                          Json{{"lo", cell_json(current.support[0])},
                               {"hi", cell_json(current.support[current.support.size() - 1])}}},
                         {"output", packed_string(current.symbols)}});
                trail.push_back(current);
            }

            Json results{{"output", packed_string(current.symbols)},
                         {"steps", step_list}};
            if (render) {
                Coord span_lo = INT64_MAX, span_hi = INT64_MIN;
                for (const Pattern& p : trail) {
                    if (p.support.empty()) continue;
                    span_lo = std::min(span_lo, p.support[0][0]);
                    span_hi = std::max(span_hi, p.support[p.support.size() - 1][0]);
                }
                Json rows = Json::array();
                for (const Pattern& p : trail) {
                    std::string row(static_cast<std::size_t>(span_hi - span_lo + 1), ' ');
                    for (std::size_t i = 0; i < p.support.size(); ++i) {
                        row[static_cast<std::size_t>(p.support[i][0] - span_lo)] =
                            static_cast<char>('0' + p.symbols[i]);
                    }
                    rows.push_back(row);
                }
                results["render"] = rows;
                for (const Json& row : rows) {
                    std::cerr << row.get<std::string>() << "\n";
                }
            }
            Json report;
            report["config_hash"] = config_hash(s);
            report["params"] = Json{{"window", box_json(window)},
                                    {"background", background},
                                    {"steps", steps}};
            report["results"] = results;
            return finish("simulate", report, opts, start, 0,
                          "output " + packed_string(current.symbols));
        }

        if (compose_cmd->parsed()) {
            RuleConfig s = load_rule_file(rules_path);
            RuleConfig t = load_rule_file(rules2_path);
            RuleConfig q = compose(s, t, limits);
            Json report;
            report["config_hash"] = config_hash(s);
            report["params"] = Json{{"inner_config_hash", config_hash(t)}};
            report["results"] = Json{{"memory", cellset_json(q.memory)},
                                     {"config", rule_config_json(q)}};
            return finish("compose", report, opts, start, 0,
                          "composite memory has " + std::to_string(q.memory.size()) +
                              " offsets");
        }

        if (image->parsed()) {
            RuleConfig s = load_rule_file(rules_path);
            Box window = parse_box_spec(window_spec);
            ImageWindow iw = image_window(s, window.cell_set(), limits);
            Json results{{"count", iw.count}, {"total", iw.total},
                         {"deficient", iw.deficient()}};
            if (iw.first_missing) {
                std::vector<Symbol> missing(iw.window.size());
                decode_symbols(*iw.first_missing, s.alphabet, missing);
                results["first_missing"] = packed_string(missing);
            }
            Json report;
            report["config_hash"] = config_hash(s);
            report["params"] = Json{{"window", box_json(window)}};
            report["results"] = results;
            return finish("image", report, opts, start, 0,
                          std::to_string(iw.count) + "/" + std::to_string(iw.total) +
                              " patterns reached");
        }

        if (surjectivity->parsed()) {
            RuleConfig s = load_rule_file(rules_path);
            Certificate cert = surjectivity_deficit(s, max_radius, limits);
            Json report;
            report["config_hash"] = config_hash(s);
            report["params"] = Json{{"max_radius", max_radius}};
            attach_certificate(report["results"], s, cert, opts, verify_ok);
            int code = cert.is_refutation() ? 1 : 0;
            if (!verify_ok) return finish("surjectivity", report, opts, start, 2,
                                          "certificate failed to replay");
            return finish("surjectivity", report, opts, start, code, cert.kind());
        }

        if (collisions->parsed()) {
            RuleConfig s = load_rule_file(rules_path);
            std::vector<Symbol> backgrounds;
            if (!backgrounds_spec.empty()) {
                backgrounds = parse_backgrounds(backgrounds_spec, s.alphabet);
            }
            Certificate cert = collision_search(s, max_radius, backgrounds, limits);
            Json report;
            report["config_hash"] = config_hash(s);
            report["params"] = Json{{"max_radius", max_radius}};
            attach_certificate(report["results"], s, cert, opts, verify_ok);
            int code = cert.is_refutation() ? 1 : 0;
            if (!verify_ok) return finish("collisions", report, opts, start, 2,
                                          "certificate failed to replay");
            return finish("collisions", report, opts, start, code, cert.kind());
        }

        if (stable->parsed()) {
            RuleConfig s = load_rule_file(rules_path);
            StableInjectivityReport rep = stable_injectivity_check(s, max_radius, limits);
            Json entries = Json::array();
            for (const auto& entry : rep.entries) {
                Json ej;
                ej["label"] = entry.label;
                attach_certificate(ej["certificate"], entry.config, entry.certificate,
                                   opts, verify_ok);
                entries.push_back(ej);
            }
            Json report;
            report["config_hash"] = config_hash(s);
            report["params"] = Json{{"max_radius", max_radius}};
            report["results"] = Json{{"verdict", rep.verdict()}, {"entries", entries}};
            if (!verify_ok) return finish("stable-injectivity", report, opts, start, 2,
                                          "certificate failed to replay");
            return finish("stable-injectivity", report, opts, start,
                          rep.refuted ? 1 : 0, rep.verdict());
        }

        if (inverse->parsed()) {
            RuleConfig s = load_rule_file(rules_path);
            Certificate cert = synthesize_inverse(s, max_radius, limits, opts.seed);
            Json report;
            report["config_hash"] = config_hash(s);
            report["params"] = Json{{"max_radius", max_radius}, {"seed", opts.seed}};
            attach_certificate(report["results"], s, cert, opts, verify_ok);
            if (!verify_ok) return finish("inverse", report, opts, start, 2,
                                          "certificate failed to replay");
            return finish("inverse", report, opts, start, 0, cert.kind());
        }

        if (determining->parsed()) {
            RuleConfig s = load_rule_file(rules_path);
            Cell cell = parse_cell_spec(cell_spec);
            auto r = min_determining_radius(s, cell, max_radius, limits);
            Json report;
            report["config_hash"] = config_hash(s);
            report["params"] = Json{{"cell", cell_json(cell)}, {"max_radius", max_radius}};
            report["results"] = Json{{"radius", r ? Json(*r) : Json(nullptr)}};
            return finish("determining-radius", report, opts, start, 0,
                          r ? "radius " + std::to_string(*r)
                            : "none within " + std::to_string(max_radius));
        }

        if (periodize->parsed()) {
            RuleConfig s = load_rule_file(rules_path);
            Box box = parse_box_spec(box_spec);
            Pattern x = parse_pattern_spec(input_spec, s.dim, s.alphabet, box);
            Pattern y = apply_periodized(s, box, x);
            Json report;
            report["config_hash"] = config_hash(s);
            report["params"] = Json{{"box", box_json(box)}};
            report["results"] = Json{{"output", packed_string(y.symbols)}};
            return finish("periodize", report, opts, start, 0,
                          "output " + packed_string(y.symbols));
        }

        if (psi_check->parsed()) {
            RuleConfig s = load_rule_file(rules_path);
            Box box = parse_box_spec(box_spec);
            Certificate cert = psi_invertibility_check(s, box, limits);
            bool wrap = wrap_compatibility(s, box, s.memory);
            Json report;
            report["config_hash"] = config_hash(s);
            report["params"] = Json{{"box", box_json(box)}};
            attach_certificate(report["results"], s, cert, opts, verify_ok);
            report["results"]["wrap_compatible_with_memory"] = wrap;
            int code = cert.as<PsiBijection>() ? 0 : 1;
            if (!verify_ok) return finish("psi-check", report, opts, start, 2,
                                          "certificate failed to replay");
            return finish("psi-check", report, opts, start, code, cert.kind());
        }

        if (wrap_check->parsed()) {
            RuleConfig s = load_rule_file(rules_path);
            Box box = parse_box_spec(box_spec);
            CellSet offsets = s.memory;
            if (!offsets_spec.empty()) {
                std::vector<Cell> cells = parse_cells_list(offsets_spec);
                offsets = CellSet::from_cells(s.dim, cells);
            }
            bool ok = wrap_compatibility(s, box, offsets);
            Json report;
            report["config_hash"] = config_hash(s);
            report["params"] = Json{{"box", box_json(box)},
                                    {"offsets", cellset_json(offsets)}};
            report["results"] = Json{{"compatible", ok}};
            return finish("wrap-check", report, opts, start, ok ? 0 : 1,
                          ok ? "compatible" : "incompatible");
        }

        if (post->parsed()) {
            RuleConfig s = load_rule_file(rules_path);
            if (background < 0 || background >= s.alphabet) {
                throw Error("background symbol out of range");
            }
            Json report;
            report["config_hash"] = config_hash(s);
            if (uniform) {
                if (cells_spec.empty()) throw Error("--uniform needs --cells");
                std::vector<Cell> cells = parse_cells_list(cells_spec);
                auto r = uniform_post_surjectivity_radius(
                    s, cells, max_radius, trials, window_radius,
                    static_cast<Symbol>(background), opts.seed, limits);
                Json params{{"max_radius", max_radius}, {"trials", trials},
                            {"window_radius", window_radius},
                            {"background", background}, {"seed", opts.seed}};
                Json cj = Json::array();
                for (const Cell& c : cells) cj.push_back(cell_json(c));
                params["cells"] = cj;
                report["params"] = params;
                report["results"] = Json{{"radius", r ? Json(*r) : Json(nullptr)}};
                return finish("post-surjectivity", report, opts, start, r ? 0 : 1,
                              r ? "uniform radius " + std::to_string(*r)
                                : "no radius within " + std::to_string(max_radius));
            }
            if (cell_spec.empty()) throw Error("need --cell (or --uniform with --cells)");
            Cell cell = parse_cell_spec(cell_spec);
            CellSet hood = Box::cube(s.dim, -radius, radius).cell_set();
            Certificate cert =
                post_surjectivity_lift(s, cell, hood, trials, window_radius,
                                       static_cast<Symbol>(background), opts.seed, limits);
            report["params"] = Json{{"cell", cell_json(cell)}, {"radius", radius},
                                    {"trials", trials},
                                    {"window_radius", window_radius},
                                    {"background", background}, {"seed", opts.seed}};
            attach_certificate(report["results"], s, cert, opts, verify_ok);
            int code = cert.is_refutation() ? 1 : 0;
            if (!verify_ok) return finish("post-surjectivity", report, opts, start, 2,
                                          "certificate failed to replay");
            return finish("post-surjectivity", report, opts, start, code, cert.kind());
        }

        if (corpus_cmd->parsed()) {
            std::vector<std::string> names =
                corpus_name.empty() ? builtin_names()
                                    : std::vector<std::string>{corpus_name};
            Json examples = Json::array();
            bool all_ok = true;
            for (const std::string& name : names) {
                NamedExample ex = builtin(name);
                Json claims = Json::array();
                for (const ClaimOutcome& out : run_claims(ex, limits)) {
                    Json cj{{"op", out.op}, {"params", out.params},
                            {"expected", out.expected}, {"got", out.got},
                            {"ok", out.ok}};
                    if (out.certificate && out.certificate_config) {
                        attach_certificate(cj["certificate"], *out.certificate_config,
                                           *out.certificate, opts, verify_ok);
                    }
                    if (!out.ok) all_ok = false;
                    claims.push_back(cj);
                }
                examples.push_back(Json{{"name", name},
                                        {"config_hash", config_hash(ex.config)},
                                        {"claims", claims}});
            }
            Json report;
            report["results"] = Json{{"examples", examples}, {"all_ok", all_ok}};
            if (!verify_ok) return finish("corpus", report, opts, start, 2,
                                          "certificate failed to replay");
            return finish("corpus", report, opts, start, all_ok ? 0 : 1,
                          all_ok ? "all claims reproduced" : "claim mismatch");
        }
    } catch (const SchemaError& e) {
        std::cerr << "anuca: schema error: " << e.what() << "\n";
        return 2;
    } catch (const CapExceeded& e) {
        std::cerr << "anuca: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "anuca: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "anuca: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
