#include "ewlab/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ewlab {

namespace {

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& e) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ParseError("complex entry must be a [re, im] pair of numbers");
    }
    const Complex z(e[0].get<double>(), e[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ParseError("non-finite matrix entry");
    return z;
}

int positive_int(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
        throw ParseError(std::string("missing integer field '") + key + "'");
    }
    const auto v = j[key].get<long long>();
    if (v < 1 || v > 4096) throw ParseError(std::string("field '") + key + "' out of range");
    return static_cast<int>(v);
}

const Json& object_field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return j[key];
}

Json matrices(const std::vector<ComplexMatrix>& ms) {
    Json out = Json::array();
    for (const auto& m : ms) out.push_back(to_json(m));
    return out;
}

Json nullable(const std::optional<Json>& j) { return j ? *j : Json(nullptr); }

}  // namespace

Json to_json(const ComplexMatrix& m) {
    Json data = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(complex_pair(m(r, c)));
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("matrix must be a JSON object");
    const int rows = positive_int(j, "rows");
    const int cols = positive_int(j, "cols");
    const Json& data = object_field(j, "data");
    if (!data.is_array()) throw ParseError("matrix 'data' must be an array");
    if (data.size() != static_cast<std::size_t>(rows) * cols) {
        throw ParseError("matrix 'data' has " + std::to_string(data.size()) + " entries, expected " +
                         std::to_string(rows * cols));
    }
    ComplexMatrix m(rows, cols);
    std::size_t idx = 0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) m(r, c) = complex_from(data[idx++]);
    }
    return m;
}

Json to_json(const ComplexVector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_pair(v(i)));
    return out;
}

ComplexVector vector_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("vector must be an array of [re, im] pairs");
    ComplexVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from(j[i]);
    return v;
}

Json bipartite_to_json(const ComplexMatrix& m, const BipartiteDims& dims) {
    Json out = to_json(m);
    out["dimA"] = dims.dimA;
    out["dimB"] = dims.dimB;
    return out;
}

Json to_json(const Witness& w) {
    Json out = bipartite_to_json(w.matrix, w.dims);
    out["normalized"] = w.normalized;
    if (w.family) out["family"] = Json{{"n", w.family->n}, {"k", w.family->k}};
    return out;
}

Witness witness_from_json(const Json& j) {
    const ComplexMatrix m = matrix_from_json(j);
    const BipartiteDims dims(positive_int(j, "dimA"), positive_int(j, "dimB"));
    bool normalized = false;
    if (j.contains("normalized")) {
        if (!j["normalized"].is_boolean()) throw ParseError("'normalized' must be a boolean");
        normalized = j["normalized"].get<bool>();
    }
    std::optional<FamilySpec> family;
    if (j.contains("family") && !j["family"].is_null()) {
        const Json& f = j["family"];
        if (!f.is_object() || !f.contains("n") || !f.contains("k") || !f["n"].is_number_integer() ||
            !f["k"].is_number_integer()) {
            throw ParseError("'family' must be {\"n\": int, \"k\": int}");
        }
        family = FamilySpec(f["n"].get<int>(), f["k"].get<int>());
    }
    Witness w(m, dims, normalized, family);
    if (normalized && std::abs(w.trace() - 1.0) > 1e-10) {
        throw ParseError("witness is flagged normalized but has trace " + std::to_string(w.trace()));
    }
    if (family) {
        const Witness ref = family_witness(*family, normalized);
        if (!(ref.dims == dims) || (ref.matrix - m).cwiseAbs().maxCoeff() > 1e-10) {
            throw ParseError("'family' tag does not match the stored matrix");
        }
    }
    return w;
}

Json to_json(const ElementaryMap& phi) {
    return Json{{"in_dim", phi.in_dim},
                {"out_dim", phi.out_dim},
                {"plus", matrices(phi.plus_terms)},
                {"minus", matrices(phi.minus_terms)}};
}

ElementaryMap map_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("map must be a JSON object");
    auto terms = [&](const char* key) {
        std::vector<ComplexMatrix> out;
        if (!j.contains(key)) return out;
        if (!j[key].is_array()) throw ParseError(std::string("'") + key + "' must be an array of matrices");
        for (const auto& t : j[key]) out.push_back(matrix_from_json(t));
        return out;
    };
    return ElementaryMap(positive_int(j, "in_dim"), positive_int(j, "out_dim"), terms("plus"), terms("minus"));
}

Json to_json(const Tolerances& tol) {
    return Json{{"hermiticity", tol.hermiticity},   {"eigen_residual", tol.eigen_residual},
                {"rank", tol.rank},                 {"block_positivity", tol.block_positivity},
                {"certificate", tol.certificate},   {"ppt", tol.ppt}};
}

Json to_json(const BlockPositivityReport& r) {
    return Json{{"min_value", r.min_value},
                {"argmin_x", to_json(r.argmin_x)},
                {"argmin_y", to_json(r.argmin_y)},
                {"restarts_used", r.restarts_used},
                {"converged_iterations", r.converged_iterations}};
}

Json to_json(const PositivityReport& r) {
    return Json{{"min_value", r.min_value},
                {"argmin_x", to_json(r.argmin_x)},
                {"argmin_y", to_json(r.argmin_y)},
                {"restarts_used", r.restarts_used},
                {"status", r.consistent_with_positive ? "consistent with positive" : "non-positivity certificate"}};
}

Json to_json(const ValidationReport& r) {
    return Json{{"hermitian", r.hermitian},
                {"max_asymmetry", r.max_asymmetry},
                {"min_eigenvalue", r.min_eigenvalue},
                {"has_negative_eigenvalue", r.has_negative_eigenvalue},
                {"block_positive", r.block_positive},
                {"is_witness", r.is_witness},
                {"block_positivity", to_json(r.block)}};
}

Json to_json(const SpaResult& r, bool include_state) {
    Json out{{"lambda", r.lambda},
             {"p_star", r.p_star},
             {"min_eigenvalue", r.min_eigenvalue},
             {"min_pt_eigenvalue", r.min_pt_eigenvalue},
             {"ppt", r.ppt}};
    if (include_state) out["spa_state"] = to_json(r.spa_state);
    return out;
}

Json to_json(const SeparabilityCertificate& c) {
    Json diag = Json::array();
    for (const auto& t : c.diagonal_part) diag.push_back(Json{{"weight", t.weight}, {"a", t.a}, {"b", t.b}});
    Json blocks = Json::array();
    for (const auto& b : c.blocks) {
        blocks.push_back(Json{{"support", {b.first, b.second}},
                              {"block", to_json(b.block)},
                              {"min_eigenvalue", b.min_eigenvalue},
                              {"min_pt_eigenvalue", b.min_pt_eigenvalue},
                              {"psd_ok", b.psd_ok},
                              {"ppt_ok", b.ppt_ok}});
    }
    return Json{{"n", c.spec.n},
                {"k", c.spec.k},
                {"p_star", c.p_star},
                {"scale", c.scale},
                {"diagonal_part", std::move(diag)},
                {"blocks", std::move(blocks)},
                {"reconstruction_residual", c.reconstruction_residual},
                {"ok", c.ok}};
}

Json to_json(const DecompositionCertificate& c) {
    return Json{{"p_part", to_json(c.p_part)},
                {"q_part", to_json(c.q_part)},
                {"gamma_side", c.gamma_side == Subsystem::A ? "A" : "B"},
                {"residual", c.residual}};
}

Json to_json(const PptDetection& d) {
    return Json{{"value", d.value},
                {"psd_residual", d.psd_residual},
                {"ppt_residual", d.ppt_residual},
                {"trace_residual", d.trace_residual},
                {"rho", to_json(d.rho)}};
}

Json to_json(const PptSearchResult& r) {
    return Json{{"found", r.detection.has_value()},
                {"detection", r.detection ? to_json(*r.detection) : Json(nullptr)},
                {"best_value", r.best.value},
                {"starts", r.starts},
                {"start_values", r.start_values}};
}

Json to_json(const NonOptimalityCertificate& c) {
    return Json{{"epsilon", c.epsilon},
                {"origin", c.origin},
                {"direction", to_json(c.direction)},
                {"d", to_json(c.d)},
                {"min_eigenvalue_after", c.min_eigenvalue_after},
                {"verification", to_json(c.verification)}};
}

Json to_json(const SpanReport& r) {
    Json collected = Json::array();
    for (const auto& pv : r.collected) {
        collected.push_back(Json{{"x", to_json(pv.x)}, {"y", to_json(pv.y)}, {"value", pv.value}});
    }
    return Json{{"rank", r.rank},
                {"ambient", r.ambient},
                {"spanning", r.spanning},
                {"from_search", r.from_search},
                {"from_family", r.from_family},
                {"collected", std::move(collected)}};
}

Json to_json(const RankOneSearchResult& r) {
    return Json{{"candidates_evaluated", r.candidates_evaluated},
                {"bisections_run", r.bisections_run},
                {"best", Json{{"origin", r.best.origin},
                              {"epsilon_lower", r.best.estimate.lower},
                              {"epsilon_upper", r.best.estimate.upper},
                              {"direction", to_json(r.best.direction)}}}};
}

Json to_json(const FMatrixEvidence& e) {
    Json cands = Json::array();
    for (const auto& c : e.candidates) {
        cands.push_back(Json{{"label", c.label},
                             {"max_gram_norm", c.max_gram_norm},
                             {"probes", c.probes},
                             {"probes_exceeding", c.probes_exceeding},
                             {"exceeds", c.exceeds},
                             {"best_probe", to_json(c.best_probe)}});
    }
    return Json{{"probes_per_candidate", e.probes_per_candidate},
                {"all_exceed", e.all_exceed},
                {"extrapolated", e.extrapolated},
                {"candidates", std::move(cands)}};
}

Json to_json(const OptimalityVerdict& v, const OptimalityConfig& config) {
    std::optional<Json> cert;
    if (v.certificate) cert = to_json(*v.certificate);
    std::optional<Json> search;
    if (v.search) search = to_json(*v.search);
    std::optional<Json> fm;
    if (v.fmatrix) fm = to_json(*v.fmatrix);
    return Json{{"verdict", verdict_name(v.kind)},
                {"label", verdict_label(v.kind)},
                {"certificate", nullable(cert)},
                {"span", to_json(v.span)},
                {"search", nullable(search)},
                {"fmatrix", nullable(fm)},
                {"config", Json{{"seed", config.seed},
                                {"restarts", config.restarts},
                                {"search_budget", config.search_budget},
                                {"probe_mesh", config.probe_mesh},
                                {"tolerances", to_json(config.tol)}}}};
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str());
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

}  // namespace ewlab
