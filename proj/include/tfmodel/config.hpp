#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "tfmodel/errors.hpp"
#include "tfmodel/halfline.hpp"

namespace tfmodel {

struct z_grid_spec {
    double re_min = -1.2;
    double re_max = 1.2;
    double im_min = -1.2;
    double im_max = 1.2;
    std::size_t steps = 41;
};

struct tolerance_set {
    double identity = 1e-12;       // specialfn / matrix-entry identities
    double parseval = 1e-6;
    double parseval_shrink = 4.0;  // defect ratio when n doubles
    double roundtrip = 1e-8;
    double model_closed = 1e-10;
    double model_numeric = 1e-3;
    double transverse = 1e-12;
    double hausdorff = 2e-3;
    double sandwich = 1e-9;
    double segment_gap = 0.02;     // z-grid points closer than this to the segment are skipped
    double extrapolation = 0.02;
    double slope = 0.05;
    double radius = 0.02;
    double norm_low = 0.95;
    double norm_high = 1.0001;
};

struct run_config {
    // default verification grids
    double eta_min = -40.0;
    double eta_max = 24.0;
    std::size_t n = 4096;
    double mu_max = 20.0;
    std::size_t m = 4096;
    std::vector<double> amplitudes = {0.5, 1.0, 2.0};
    z_grid_spec z_grid;
    tolerance_set tol;
    std::string out_dir = ".";
    // dense Nystrom oracle; the window must resolve e^{i xi xi'} (xi_max^2 h < pi)
    double dense_eta_min = -20.0;
    double dense_eta_max = 2.0;
    std::size_t dense_n = 2048;
    // coarse pair used for the Parseval shrink check
    std::size_t parseval_coarse_n = 256;
    std::vector<double> witness_deltas = {0.2, 0.1, 0.05, 0.02};

    log_grid grid() const { return log_grid(eta_min, eta_max, n); }
    tfmodel::mu_grid mus() const { return tfmodel::mu_grid(mu_max, m); }
    log_grid dense_grid() const { return log_grid(dense_eta_min, dense_eta_max, dense_n); }
};

/// Throws argument_error naming the first invalid field.
inline void validate(const run_config& c)
{
    auto bad = [](const std::string& what) { throw argument_error("config: " + what); };
    try {
        (void)c.grid();
        (void)c.mus();
        (void)c.dense_grid();
    } catch (const argument_error& e) {
        bad(e.what());
    }
    if (c.amplitudes.empty())
        bad("amplitudes must not be empty");
    for (double a : c.amplitudes)
        if (!std::isfinite(a) || !(a > 0.0))
            bad("amplitudes must be positive");
    const auto& z = c.z_grid;
    if (!std::isfinite(z.re_min) || !std::isfinite(z.re_max) || !std::isfinite(z.im_min) ||
        !std::isfinite(z.im_max) || !(z.re_min <= z.re_max) || !(z.im_min <= z.im_max))
        bad("z_grid bounds must be finite with min <= max");
    if (z.steps < 1)
        bad("z_grid.steps must be >= 1");
    if (c.parseval_coarse_n < 2)
        bad("parseval_coarse_n must be >= 2");
    if (c.witness_deltas.empty())
        bad("witness_deltas must not be empty");
    for (std::size_t i = 0; i < c.witness_deltas.size(); ++i) {
        const double d = c.witness_deltas[i];
        if (!std::isfinite(d) || !(d > 0.0))
            bad("witness_deltas must be positive");
        if (i > 0 && !(d < c.witness_deltas[i - 1]))
            bad("witness_deltas must be strictly decreasing");
    }
    const auto& t = c.tol;
    for (double v : {t.identity, t.parseval, t.parseval_shrink, t.roundtrip, t.model_closed,
                     t.model_numeric, t.transverse, t.hausdorff, t.sandwich, t.segment_gap,
                     t.extrapolation, t.slope, t.radius, t.norm_low, t.norm_high})
        if (!std::isfinite(v) || v < 0.0)
            bad("tolerances must be finite and non-negative");
    if (c.out_dir.empty())
        bad("out_dir must not be empty");
}

namespace detail {

template <class T>
void take(const nlohmann::json& j, const char* key, T& dst, std::set<std::string>& seen)
{
    if (!j.contains(key))
        return;
    seen.insert(key);
    if constexpr (std::is_same_v<T, std::size_t>)
        if (!j.at(key).is_number_unsigned() &&
            !(j.at(key).is_number_integer() && j.at(key).template get<long long>() >= 0))
            throw argument_error(std::string("config: field '") + key +
                                 "' must be a non-negative integer");
    try {
        dst = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw argument_error(std::string("config: field '") + key + "': " + e.what());
    }
}

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& seen,
                           const std::string& where)
{
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!seen.count(it.key()))
            throw argument_error("config: unknown field '" + where + it.key() + "'");
}

} // namespace detail

inline run_config config_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw argument_error("config: top level must be a JSON object");
    run_config c;
    std::set<std::string> seen;
    detail::take(j, "eta_min", c.eta_min, seen);
    detail::take(j, "eta_max", c.eta_max, seen);
    detail::take(j, "n", c.n, seen);
    detail::take(j, "mu_max", c.mu_max, seen);
    detail::take(j, "m", c.m, seen);
    detail::take(j, "amplitudes", c.amplitudes, seen);
    detail::take(j, "out_dir", c.out_dir, seen);
    detail::take(j, "dense_eta_min", c.dense_eta_min, seen);
    detail::take(j, "dense_eta_max", c.dense_eta_max, seen);
    detail::take(j, "dense_n", c.dense_n, seen);
    detail::take(j, "parseval_coarse_n", c.parseval_coarse_n, seen);
    detail::take(j, "witness_deltas", c.witness_deltas, seen);

    if (j.contains("z_grid")) {
        seen.insert("z_grid");
        const auto& z = j.at("z_grid");
        if (!z.is_object())
            throw argument_error("config: z_grid must be an object");
        std::set<std::string> zs;
        detail::take(z, "re_min", c.z_grid.re_min, zs);
        detail::take(z, "re_max", c.z_grid.re_max, zs);
        detail::take(z, "im_min", c.z_grid.im_min, zs);
        detail::take(z, "im_max", c.z_grid.im_max, zs);
        detail::take(z, "steps", c.z_grid.steps, zs);
        detail::reject_unknown(z, zs, "z_grid.");
    }
    if (j.contains("tolerances")) {
        seen.insert("tolerances");
        const auto& t = j.at("tolerances");
        if (!t.is_object())
            throw argument_error("config: tolerances must be an object");
        std::set<std::string> ts;
        auto& o = c.tol;
        detail::take(t, "identity", o.identity, ts);
        detail::take(t, "parseval", o.parseval, ts);
        detail::take(t, "parseval_shrink", o.parseval_shrink, ts);
        detail::take(t, "roundtrip", o.roundtrip, ts);
        detail::take(t, "model_closed", o.model_closed, ts);
        detail::take(t, "model_numeric", o.model_numeric, ts);
        detail::take(t, "transverse", o.transverse, ts);
        detail::take(t, "hausdorff", o.hausdorff, ts);
        detail::take(t, "sandwich", o.sandwich, ts);
        detail::take(t, "segment_gap", o.segment_gap, ts);
        detail::take(t, "extrapolation", o.extrapolation, ts);
        detail::take(t, "slope", o.slope, ts);
        detail::take(t, "radius", o.radius, ts);
        detail::take(t, "norm_low", o.norm_low, ts);
        detail::take(t, "norm_high", o.norm_high, ts);
        detail::reject_unknown(t, ts, "tolerances.");
    }
    detail::reject_unknown(j, seen, "");
    validate(c);
    return c;
}

inline nlohmann::json config_to_json(const run_config& c)
{
    const auto& t = c.tol;
    return {{"eta_min", c.eta_min},
            {"eta_max", c.eta_max},
            {"n", c.n},
            {"mu_max", c.mu_max},
            {"m", c.m},
            {"amplitudes", c.amplitudes},
            {"z_grid",
             {{"re_min", c.z_grid.re_min},
              {"re_max", c.z_grid.re_max},
              {"im_min", c.z_grid.im_min},
              {"im_max", c.z_grid.im_max},
              {"steps", c.z_grid.steps}}},
            {"tolerances",
             {{"identity", t.identity},
              {"parseval", t.parseval},
              {"parseval_shrink", t.parseval_shrink},
              {"roundtrip", t.roundtrip},
              {"model_closed", t.model_closed},
              {"model_numeric", t.model_numeric},
              {"transverse", t.transverse},
              {"hausdorff", t.hausdorff},
              {"sandwich", t.sandwich},
              {"segment_gap", t.segment_gap},
              {"extrapolation", t.extrapolation},
              {"slope", t.slope},
              {"radius", t.radius},
              {"norm_low", t.norm_low},
              {"norm_high", t.norm_high}}},
            {"out_dir", c.out_dir},
            {"dense_eta_min", c.dense_eta_min},
            {"dense_eta_max", c.dense_eta_max},
            {"dense_n", c.dense_n},
            {"parseval_coarse_n", c.parseval_coarse_n},
            {"witness_deltas", c.witness_deltas}};
}

inline run_config load_config(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw argument_error("config: cannot open " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw argument_error("config: " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

} // namespace tfmodel
