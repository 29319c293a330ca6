#pragma once

#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tfmodel/config.hpp"
#include "tfmodel/io.hpp"
#include "tfmodel/operator.hpp"
#include "tfmodel/spectral.hpp"
#include "tfmodel/unitary.hpp"
#include "tfmodel/verify.hpp"

namespace tfmodel {

enum exit_code : int { exit_pass = 0, exit_check_failure = 1, exit_usage = 2 };

struct cli_options {
    std::string command;
    std::string config_path;
    bool json = false;
    std::string out_dir;
    std::optional<std::size_t> n;
    std::optional<double> mu_max;
    bool slow = false;
    // transform
    std::string input;
    std::string direction;
    std::string rule = "trapezoid";
    std::string output;
    // witness
    std::vector<double> deltas;
};

/// Config file (or defaults) with command-line overrides applied, then validated.
inline run_config resolve_config(const cli_options& o)
{
    run_config c = o.config_path.empty() ? run_config{} : load_config(o.config_path);
    if (o.n)
        c.n = *o.n;
    if (o.mu_max)
        c.mu_max = *o.mu_max;
    if (!o.out_dir.empty())
        c.out_dir = o.out_dir;
    if (!o.deltas.empty())
        c.witness_deltas = o.deltas;
    validate(c);
    return c;
}

inline nlohmann::json report_json(const std::vector<check_result>& rs)
{
    auto arr = nlohmann::json::array();
    for (const auto& r : rs) {
        nlohmann::json j = {{"check", r.name},
                            {"value", r.value},
                            {"tolerance", r.tolerance},
                            {"pass", r.pass}};
        if (!r.detail.empty())
            j["detail"] = r.detail;
        arr.push_back(j);
    }
    return arr;
}

/// The verification suite in report order. Exceptions inside a check turn into a failed line.
inline std::vector<check_result> run_verification(const run_config& c, bool slow,
                                                  const std::function<void(const check_result&)>& on_result = {})
{
    std::vector<check_result> out;
    auto add = [&](check_result r) {
        if (on_result)
            on_result(r);
        out.push_back(std::move(r));
    };
    auto guarded = [&](const char* name, auto&& fn) {
        try {
            using R = decltype(fn());
            if constexpr (std::is_same_v<R, check_result>)
                add(fn());
            else
                for (auto& r : fn())
                    add(std::move(r));
        } catch (const std::exception& e) {
            add({name, std::numeric_limits<double>::quiet_NaN(), 0.0, false, e.what()});
        }
    };
    guarded("reflection_identity", [&] { return check_reflection(c); });
    guarded("abs_gamma_sq_consistency", [&] { return check_abs_gamma(c); });
    guarded("parseval_defect", [&] { return check_parseval(c); });
    guarded("parseval_shrink_ratio", [&] { return check_parseval_shrink(c); });
    guarded("roundtrip_defect", [&] { return check_roundtrip(c); });
    guarded("model_identity_closed_form", [&] { return check_model_closed(c); });
    guarded("model_identity_numeric", [&] { return check_model_numeric(c); });
    guarded("model_entry_identities", [&] { return check_entry_identities(c); });
    guarded("resolvent_sandwich_violation", [&] { return check_resolvent_sandwich(c); });
    guarded("witness", [&] { return check_witness(c); });
    guarded("spectrum", [&] { return check_spectrum(c); });
    guarded("normal_line", [&] { return check_normal_line(c); });
    guarded("two_by_two_norm_violation", [&] { return check_two_by_two_norms(c); });
    guarded("operator_norm", [&] { return check_operator_norm(c); });
    if (slow)
        guarded("spectral_radius", [&] { return check_spectral_radius(c); });
    return out;
}

inline std::string format_check_line(const check_result& r)
{
    std::string s = std::string(r.pass ? "PASS " : "FAIL ") + r.name + " value=" +
                    fmt_short(r.value) + " tol=" + fmt_short(r.tolerance);
    if (!r.detail.empty())
        s += " (" + r.detail + ")";
    return s;
}

inline std::filesystem::path prepare_out_dir(const run_config& c)
{
    std::filesystem::path dir(c.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw io_error("cannot create output directory " + dir.string());
    return dir;
}

inline int cmd_verify(const run_config& c, bool slow, bool json, std::ostream& out)
{
    const auto dir = prepare_out_dir(c);
    std::function<void(const check_result&)> echo;
    if (!json)
        echo = [&](const check_result& r) { out << format_check_line(r) << '\n' << std::flush; };
    const auto results = run_verification(c, slow, echo);
    const auto report = report_json(results);
    write_atomic(dir / "verify_report.json", report.dump(2) + "\n");
    const check_result* first_fail = nullptr;
    for (const auto& r : results)
        if (!r.pass && !first_fail)
            first_fail = &r;
    if (json) {
        out << report.dump(2) << '\n';
    } else if (first_fail) {
        out << "verify: FAILED, first failure: " << first_fail->name << '\n';
    } else {
        out << "verify: all " << results.size() << " checks passed\n";
    }
    return first_fail ? exit_check_failure : exit_pass;
}

inline int cmd_spectrum(const run_config& c, std::ostream& out)
{
    const auto dir = prepare_out_dir(c);
    const auto mu = c.mus();
    write_atomic(dir / "spectrum.csv", eigencurve_csv(mu));
    write_atomic(dir / "model_matrix.csv", model_sweep_csv(mu));
    out << (dir / "spectrum.csv").string() << '\n' << (dir / "model_matrix.csv").string() << '\n';
    return exit_pass;
}

inline int cmd_resolvent(const run_config& c, std::ostream& out)
{
    const auto dir = prepare_out_dir(c);
    const auto mu = c.mus();
    std::vector<resolvent_bounds> rows;
    for (const cplx z : z_grid_points(c.z_grid, 1e-6))
        rows.push_back(resolvent_bounds_operator(z, mu));
    write_atomic(dir / "resolvent.csv", resolvent_csv(rows));
    out << (dir / "resolvent.csv").string() << '\n';
    return exit_pass;
}

inline int cmd_transform(const run_config& c, const cli_options& o, std::ostream& out)
{
    const std::filesystem::path in(o.input);
    const auto rule = o.rule == "product_linear" ? quadrature_rule::product_linear
                                                 : quadrature_rule::trapezoid;
    // inputs are read before the output directory is touched
    std::optional<halfline_function> x;
    std::optional<model_element> phi;
    if (o.direction == "inverse")
        phi = load_model_element(in);
    else
        x = load_halfline(in);

    const auto dir = prepare_out_dir(c);
    const std::filesystem::path dst =
        o.output.empty() ? dir / (in.stem().string() + "_" + o.direction + ".csv")
                         : std::filesystem::path(o.output);
    if (o.direction == "forward")
        save_model_element(forward_u(*x, c.mus()), dst);
    else if (o.direction == "inverse")
        save_halfline(inverse_u(*phi, c.grid()), dst);
    else
        save_halfline(apply_trunc_fourier(*x, rule), dst);
    out << dst.string() << '\n';
    return exit_pass;
}

inline int cmd_witness(const run_config& c, std::ostream& out)
{
    const auto dir = prepare_out_dir(c);
    const auto t = non_normality_witness(c.witness_deltas, c.mus());
    write_atomic(dir / "witness.csv", witness_csv(t));
    out << (dir / "witness.csv").string() << '\n';
    if (t.slope)
        out << "loglog slope: " << fmt17(*t.slope) << '\n';
    else
        out << "loglog slope: n/a (single delta)\n";
    return exit_pass;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Truncated Fourier operator on the half-line: functional model and spectral checks",
                 "tfmodel"};
    app.require_subcommand(1);
    app.fallthrough();
    cli_options o;
    app.add_option("--config", o.config_path, "JSON run configuration");
    app.add_flag("--json", o.json, "machine-readable report only");
    app.add_option("--out", o.out_dir, "output directory");
    app.add_option("--n", o.n, "override the eta-grid size");
    app.add_option("--mu-max", o.mu_max, "override the mu-grid extent");
    app.add_flag("--slow", o.slow, "include the dense eigensolve check");

    app.add_subcommand("verify", "run every identity suite");
    app.add_subcommand("spectrum", "eigencurve and model-matrix sweeps");
    app.add_subcommand("resolvent", "resolvent bounds over the z grid");
    auto* tr = app.add_subcommand("transform", "apply U, U^{-1} or the truncated transform to a CSV");
    tr->add_option("--input", o.input, "input CSV (with JSON sidecar)")->required();
    tr->add_option("--direction", o.direction, "forward | inverse | fourier")
        ->required()
        ->check(CLI::IsMember({"forward", "inverse", "fourier"}));
    tr->add_option("--rule", o.rule, "quadrature for fourier: trapezoid | product_linear")
        ->check(CLI::IsMember({"trapezoid", "product_linear"}));
    tr->add_option("--output", o.output, "output CSV path");
    auto* wt = app.add_subcommand("witness", "resolvent growth along the normal at 0");
    wt->add_option("--deltas", o.deltas, "strictly decreasing positive deltas")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? exit_pass : exit_usage;
    }
    o.command = app.get_subcommands().front()->get_name();

    run_config c;
    try {
        c = resolve_config(o);
    } catch (const std::exception& e) {
        err << "tfmodel: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (o.command == "verify")
            return cmd_verify(c, o.slow, o.json, out);
        if (o.command == "spectrum")
            return cmd_spectrum(c, out);
        if (o.command == "resolvent")
            return cmd_resolvent(c, out);
        if (o.command == "transform")
            return cmd_transform(c, o, out);
        return cmd_witness(c, out);
    } catch (const argument_error& e) {
        err << "tfmodel: " << e.what() << '\n';
        return exit_usage;
    } catch (const grid_mismatch& e) {
        err << "tfmodel: " << e.what() << '\n';
        return exit_usage;
    } catch (const io_error& e) {
        err << "tfmodel: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "tfmodel: " << e.what() << '\n';
        return exit_check_failure;
    }
}

} // namespace tfmodel
