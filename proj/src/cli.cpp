#include "ewlab/cli.hpp"

#include "ewlab/decomp.hpp"
#include "ewlab/json_io.hpp"
#include "ewlab/optimality.hpp"
#include "ewlab/random.hpp"
#include "ewlab/witness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <sstream>

namespace ewlab::cli {

namespace {

// Per-command seed streams: every randomized step draws derive_seed(--seed, tag).
enum SeedTag : std::uint64_t {
    kSeedValidate = 1,
    kSeedOptimality = 2,
    kSeedSpanning = 3,
    kSeedSpa = 4,
    kSeedPpt = 5,
    kSeedDecompose = 6,
};

struct RunConfig {
    std::uint64_t seed = 0;
    int restarts = 64;
    int search_budget = 256;
    int probe_mesh = 200;
    Tolerances tol;
    std::string out;
    std::string format = "json";

    // Witness source: a file, or an in-process family build.
    std::string witness_path;
    int n = 0;
    int k = 0;
    bool normalize = false;
};

void add_witness_source(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("witness", cfg.witness_path, "Witness JSON file");
    sub->add_option("--n", cfg.n, "Build W^(n,k) in-process instead of reading a file");
    sub->add_option("--k", cfg.k, "Shift parameter for --n");
    sub->add_flag("--normalize", cfg.normalize, "Divide the in-process witness by its trace");
}

void add_run_options(CLI::App* sub, RunConfig& cfg, std::string& format) {
    sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    sub->add_option("--restarts", cfg.restarts, "Block-positivity restarts")
        ->check(CLI::Range(1, 1 << 20))
        ->capture_default_str();
    sub->add_option("--search-budget", cfg.search_budget, "Rank-one search budget")
        ->check(CLI::Range(1, 1 << 20))
        ->capture_default_str();
    sub->add_option("--probe-mesh", cfg.probe_mesh, "F-matrix probes per candidate")
        ->check(CLI::Range(1, 1 << 20))
        ->capture_default_str();
    const auto pos = CLI::PositiveNumber;
    sub->add_option("--tol-hermiticity", cfg.tol.hermiticity)->check(pos)->capture_default_str();
    sub->add_option("--tol-eigen-residual", cfg.tol.eigen_residual)->check(pos)->capture_default_str();
    sub->add_option("--tol-rank", cfg.tol.rank)->check(pos)->capture_default_str();
    sub->add_option("--tol-block-positivity", cfg.tol.block_positivity)->check(pos)->capture_default_str();
    sub->add_option("--tol-certificate", cfg.tol.certificate)->check(pos)->capture_default_str();
    sub->add_option("--tol-ppt", cfg.tol.ppt)->check(pos)->capture_default_str();
    sub->add_option("--out", cfg.out, "Write the report here instead of stdout");
    sub->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
}

Witness load_witness(const RunConfig& cfg) {
    if (!cfg.witness_path.empty()) {
        if (cfg.n != 0) throw InvalidArgument("give either a witness file or --n/--k, not both");
        return witness_from_json(read_json_file(cfg.witness_path));
    }
    if (cfg.n == 0) throw InvalidArgument("no witness: pass a witness file or --n/--k");
    return family_witness(FamilySpec(cfg.n, cfg.k), cfg.normalize);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string scalar_text(const Json& v) {
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
}

// Top-level scalars as key,value rows; nested objects one level down as parent.key.
std::string flatten_csv(const Json& j) {
    std::ostringstream os;
    os << "key,value\n";
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.value().is_object()) {
            for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
                if (jt.value().is_primitive()) {
                    os << csv_escape(it.key() + "." + jt.key()) << "," << csv_escape(scalar_text(jt.value())) << "\n";
                }
            }
        } else if (it.value().is_primitive()) {
            os << csv_escape(it.key()) << "," << csv_escape(scalar_text(it.value())) << "\n";
        }
    }
    return os.str();
}

void emit_text(const std::string& text, const RunConfig& cfg, std::ostream& out) {
    if (cfg.out.empty()) {
        out << text;
    } else {
        write_text_file(cfg.out, text);
    }
}

void emit(const Json& report, const RunConfig& cfg, std::ostream& out) {
    emit_text(cfg.format == "csv" ? flatten_csv(report) : report.dump(2) + "\n", cfg, out);
}

Json witness_summary(const Witness& w) {
    Json s{{"dimA", w.dims.dimA},
           {"dimB", w.dims.dimB},
           {"trace", w.trace()},
           {"lambda_min", min_eigenvalue(w.matrix)},
           {"normalized", w.normalized}};
    if (w.family) s["family"] = Json{{"n", w.family->n}, {"k", w.family->k}};
    return s;
}

int cmd_build(const RunConfig& cfg, std::ostream& out) {
    const Witness w = family_witness(FamilySpec(cfg.n, cfg.k), cfg.normalize);
    const std::string text = to_json(w).dump() + "\n";
    if (cfg.out.empty()) {
        out << text;
    } else {
        write_text_file(cfg.out, text);
        const Json s = witness_summary(w);
        out << "dims " << w.dims.dimA << "x" << w.dims.dimB << "\n"
            << "trace " << format_number(s["trace"].get<double>()) << "\n"
            << "lambda_min " << format_number(s["lambda_min"].get<double>()) << "\n";
    }
    return kOk;
}

ValidationReport validation_of(const Witness& w, const RunConfig& cfg) {
    return validate_witness(w, cfg.restarts, derive_seed(cfg.seed, kSeedValidate), cfg.tol);
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    const Witness w = load_witness(cfg);
    const ValidationReport v = validation_of(w, cfg);
    Json report{{"witness", witness_summary(w)}, {"validation", to_json(v)}};
    emit(report, cfg, out);
    return v.is_witness ? kOk : kFailed;
}

OptimalityConfig optimality_config(const RunConfig& cfg) {
    OptimalityConfig oc;
    oc.restarts = cfg.restarts;
    oc.search_budget = cfg.search_budget;
    oc.probe_mesh = cfg.probe_mesh;
    oc.seed = derive_seed(cfg.seed, kSeedOptimality);
    oc.tol = cfg.tol;
    return oc;
}

int cmd_optimality(const RunConfig& cfg, std::ostream& out) {
    const Witness w = load_witness(cfg);
    const ValidationReport v = validation_of(w, cfg);
    if (!v.is_witness) {
        emit(Json{{"witness", witness_summary(w)}, {"validation", to_json(v)}, {"verdict", nullptr}}, cfg, out);
        return kFailed;
    }
    const OptimalityConfig oc = optimality_config(cfg);
    const OptimalityVerdict verdict = optimality_report(w, oc);
    Json report = to_json(verdict, oc);
    report["witness"] = witness_summary(w);
    emit(report, cfg, out);
    return kOk;
}

int cmd_spanning(const RunConfig& cfg, std::ostream& out) {
    const Witness w = load_witness(cfg);
    const ValidationReport v = validation_of(w, cfg);
    if (!v.is_witness) {
        emit(Json{{"witness", witness_summary(w)}, {"validation", to_json(v)}, {"span", nullptr}}, cfg, out);
        return kFailed;
    }
    const SpanReport span = spanning_dimension(w, cfg.restarts, derive_seed(cfg.seed, kSeedSpanning), cfg.tol);
    Json s = to_json(span);
    emit(Json{{"witness", witness_summary(w)},
              {"rank", span.rank},
              {"ambient", span.ambient},
              {"spanning", span.spanning},
              {"span", std::move(s)}},
         cfg, out);
    return kOk;
}

int cmd_spa(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Witness w = load_witness(cfg);
    if (!w.normalized) {
        err << "error: spa needs a normalized witness (trace 1); build with --normalize\n";
        return kInvalidInput;
    }
    SpaResult result;
    try {
        result = spa(w, cfg.restarts, derive_seed(cfg.seed, kSeedSpa));
    } catch (const NotAWitness& e) {
        emit(Json{{"witness", witness_summary(w)}, {"error", e.what()}}, cfg, out);
        return kFailed;
    }
    Json report{{"witness", witness_summary(w)}, {"spa", to_json(result)}};
    bool ok = result.ppt && result.min_eigenvalue >= -cfg.tol.hermiticity;
    if (w.family && !w.family->is_half()) {
        try {
            const SeparabilityCertificate cert = spa_separability_certificate(*w.family);
            report["separability"] = to_json(cert);
            ok = ok && cert.ok;
        } catch (const CertificateFailure& e) {
            report["separability"] = Json{{"ok", false}, {"error", e.what()}, {"residual", e.residual}};
            ok = false;
        }
    } else {
        report["separability"] = nullptr;
    }
    emit(report, cfg, out);
    return ok ? kOk : kFailed;
}

PptSearchOptions ppt_options(const RunConfig& cfg, std::uint64_t tag) {
    PptSearchOptions opts;
    opts.seed = derive_seed(cfg.seed, tag);
    opts.threshold = cfg.tol.certificate;
    return opts;
}

int cmd_decompose(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Witness w = load_witness(cfg);
    if (!w.family || !w.family->is_half()) {
        err << "error: the explicit decomposition exists only for family witnesses with k = n/2\n";
        return kInvalidInput;
    }
    DecompositionCertificate cert = decompose_half(w.family->n);
    if (w.normalized) cert = scale_certificate(cert, 1.0 / w.family->trace_scale());
    const bool verified = verify_decomposition(w, cert, cfg.tol);
    const ComplexMatrix q_gamma = partial_transpose(cert.q_part, w.dims, cert.gamma_side);
    BlockMinOptions bo;
    bo.budget = cfg.restarts;
    bo.seed = derive_seed(cfg.seed, kSeedDecompose);
    const BlockPositivityReport q_report = block_min(q_gamma, w.dims, bo);
    const PptSearchResult ppt = ppt_detection_search(w, ppt_options(cfg, kSeedPpt));
    // A decomposable witness cannot detect a PPT state.
    const bool consistent = !(verified && ppt.detection);
    Json report{{"witness", witness_summary(w)},
                {"verified", verified},
                {"consistent", consistent},
                {"q_gamma_block_min", q_report.min_value},
                {"decomposition", to_json(cert)},
                {"ppt_detection", to_json(ppt)}};
    emit(report, cfg, out);
    return verified && consistent ? kOk : kFailed;
}

int cmd_ppt_detect(const RunConfig& cfg, std::ostream& out) {
    const Witness w = load_witness(cfg);
    const PptSearchResult ppt = ppt_detection_search(w, ppt_options(cfg, kSeedPpt));
    Json report{{"witness", witness_summary(w)}, {"found", ppt.detection.has_value()}, {"search", to_json(ppt)}};
    bool alarm = false;
    if (w.family && w.family->is_half() && ppt.detection) {
        const DecompositionCertificate cert = w.normalized
                                                  ? scale_certificate(decompose_half(w.family->n),
                                                                      1.0 / w.family->trace_scale())
                                                  : decompose_half(w.family->n);
        alarm = verify_decomposition(w, cert, cfg.tol);
        report["consistency_alarm"] = alarm;
    }
    emit(report, cfg, out);
    return alarm ? kFailed : kOk;
}

struct ReportRow {
    int n = 0;
    int k = 0;
    double trace = 0.0;
    double lambda_min = 0.0;
    double p_star = 0.0;
    int spanning_rank = 0;
    int ambient = 0;
    std::string verdict;
    std::string decomposable;
    double ppt_value = 0.0;
    bool alarm = false;
};

ReportRow report_row(const FamilySpec& spec, const RunConfig& cfg) {
    const Witness w = family_witness(spec, true);
    ReportRow row;
    row.n = spec.n;
    row.k = spec.k;
    row.trace = w.trace();
    row.lambda_min = min_eigenvalue(w.matrix);
    const std::uint64_t base = derive_seed(cfg.seed, static_cast<std::uint64_t>(spec.n * 64 + spec.k));
    RunConfig local = cfg;
    local.seed = base;
    row.p_star = spa(w, cfg.restarts, derive_seed(base, kSeedSpa)).p_star;
    const OptimalityVerdict verdict = optimality_report(w, optimality_config(local));
    row.spanning_rank = verdict.span.rank;
    row.ambient = verdict.span.ambient;
    row.verdict = verdict_name(verdict.kind);
    const PptSearchResult ppt = ppt_detection_search(w, ppt_options(local, kSeedPpt));
    row.ppt_value = ppt.best.value;
    if (spec.is_half()) {
        const auto cert = scale_certificate(decompose_half(spec.n), 1.0 / spec.trace_scale());
        const bool verified = verify_decomposition(w, cert, cfg.tol);
        row.decomposable = verified ? "yes" : "unknown";
        row.alarm = verified && ppt.detection.has_value();
    } else {
        row.decomposable = ppt.detection ? "no" : "unknown";
    }
    return row;
}

int cmd_report_all(const RunConfig& cfg, const std::string& n_range, const std::string& k_range, std::ostream& out,
                   std::ostream& err) {
    const RangeSpec nr = parse_range(n_range);
    if (nr.lo <= nr.hi && (nr.lo < 3 || nr.hi > 6)) {
        err << "error: n range must lie within 3:6\n";
        return kInvalidInput;
    }
    std::optional<RangeSpec> kr;
    if (!k_range.empty()) kr = parse_range(k_range);
    std::vector<ReportRow> rows;
    for (int n = nr.lo; n <= nr.hi; ++n) {
        const int k_lo = kr ? std::max(kr->lo, 1) : 1;
        const int k_hi = kr ? std::min(kr->hi, n - 1) : n - 1;
        for (int k = k_lo; k <= k_hi; ++k) rows.push_back(report_row(FamilySpec(n, k), cfg));
    }
    bool alarm = false;
    for (const auto& r : rows) alarm = alarm || r.alarm;
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "n,k,trace,lambda_min,p_star,spanning_rank,ambient,verdict,decomposable,ppt_detection_value\n";
        for (const auto& r : rows) {
            os << r.n << "," << r.k << "," << format_number(r.trace) << "," << format_number(r.lambda_min) << ","
               << format_number(r.p_star) << "," << r.spanning_rank << "," << r.ambient << "," << r.verdict << ","
               << r.decomposable << "," << format_number(r.ppt_value) << "\n";
        }
        emit_text(os.str(), cfg, out);
    } else {
        Json arr = Json::array();
        for (const auto& r : rows) {
            arr.push_back(Json{{"n", r.n},
                               {"k", r.k},
                               {"trace", r.trace},
                               {"lambda_min", r.lambda_min},
                               {"p_star", r.p_star},
                               {"spanning_rank", r.spanning_rank},
                               {"ambient", r.ambient},
                               {"verdict", r.verdict},
                               {"label", r.verdict == "no_certificate" ? "consistent with optimal" : r.verdict},
                               {"decomposable", r.decomposable},
                               {"ppt_detection_value", r.ppt_value},
                               {"consistency_alarm", r.alarm}});
        }
        emit_text(Json{{"rows", std::move(arr)}}.dump(2) + "\n", cfg, out);
    }
    return alarm ? kFailed : kOk;
}

}  // namespace

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

RangeSpec parse_range(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = std::string::npos;
        }
        if (used != s.size() || s.empty()) throw InvalidArgument("bad range '" + text + "': expected a:b");
        return v;
    };
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        const int v = to_int(text);
        return {v, v};
    }
    return {to_int(text.substr(0, colon)), to_int(text.substr(colon + 1))};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement-witness verification lab for the Phi^(n,k) family", "ewlab"};
    app.require_subcommand(1);
    std::vector<std::pair<CLI::App*, std::function<int()>>> commands;
    RunConfig cfg;
    std::string n_range;
    std::string k_range;

    auto* build = app.add_subcommand("build", "Write the W^(n,k) witness as JSON");
    build->add_option("--n", cfg.n, "Dimension n >= 3")->required();
    build->add_option("--k", cfg.k, "Shift 1 <= k <= n-1")->required();
    build->add_flag("--normalize", cfg.normalize, "Divide by the trace n(n-1)");
    build->add_option("--out", cfg.out, "Output file (stdout if omitted)");
    commands.emplace_back(build, [&] { return cmd_build(cfg, out); });

    auto witness_command = [&](const char* name, const char* help, std::function<int()> fn) {
        auto* sub = app.add_subcommand(name, help);
        add_witness_source(sub, cfg);
        add_run_options(sub, cfg, cfg.format);
        commands.emplace_back(sub, std::move(fn));
    };
    witness_command("validate", "Check the witness axioms", [&] { return cmd_validate(cfg, out); });
    witness_command("optimality", "Spanning test, rank-one subtraction search, F-matrix evidence",
                    [&] { return cmd_optimality(cfg, out); });
    witness_command("spanning", "Rank of the zero product vectors", [&] { return cmd_spanning(cfg, out); });
    witness_command("spa", "Structural physical approximation and separability certificate",
                    [&] { return cmd_spa(cfg, out, err); });
    witness_command("decompose", "Explicit P + Q^Gamma split for k = n/2",
                    [&] { return cmd_decompose(cfg, out, err); });
    witness_command("ppt-detect", "Search for a detected PPT state", [&] { return cmd_ppt_detect(cfg, out); });

    auto* report = app.add_subcommand("report-all", "Summary table over a range of (n, k)");
    report->add_option("--n", n_range, "n range a:b within 3:6")->required();
    report->add_option("--k", k_range, "k range a:b (default 1:n-1)");
    std::string report_format = "csv";
    add_run_options(report, cfg, report_format);
    commands.emplace_back(report, [&] {
        cfg.format = report_format;
        return cmd_report_all(cfg, n_range, k_range, out, err);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInvalidInput;
    }

    try {
        for (auto& [sub, fn] : commands) {
            if (sub->parsed()) return fn();
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const InvalidDims& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const HermiticityViolation& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kInvalidInput;
}

}  // namespace ewlab::cli
