#pragma once

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfmodel/errors.hpp"
#include "tfmodel/halfline.hpp"
#include "tfmodel/model.hpp"
#include "tfmodel/spectral.hpp"
#include "tfmodel/unitary.hpp"

namespace tfmodel {

// 17 significant digits: round-trips every double.
inline std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_short(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Writes via a temporary file in the same directory, then renames over path.
inline void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw io_error("cannot open " + tmp.string() + " for writing");
        os << content;
        os.flush();
        if (!os)
            throw io_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw io_error("cannot rename into " + path.string());
    }
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& csv)
{
    auto p = csv;
    p.replace_extension(".json");
    return p;
}

class csv_writer {
public:
    explicit csv_writer(const std::string& header) { out_ << header << '\n'; }
    void comment(const std::string& line) { out_ << "# " << line << '\n'; }
    template <class... T>
    void row(T... v)
    {
        bool first = true;
        ((out_ << (first ? "" : ",") << fmt17(v), first = false), ...);
        out_ << '\n';
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

namespace detail {

inline std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                         const std::string& header,
                                                         std::size_t columns)
{
    std::ifstream is(path);
    if (!is)
        throw io_error("cannot open " + path.string());
    std::string line;
    bool seen_header = false;
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        if (!seen_header) {
            if (line != header)
                throw io_error(path.string() + ": expected header '" + header + "'");
            seen_header = true;
            continue;
        }
        std::vector<double> r;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            const char* end = cell.data() + cell.size();
            const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
            if (ptr != end || cell.empty() || (ec != std::errc() && ec != std::errc::result_out_of_range))
                throw io_error(path.string() + ":" + std::to_string(lineno) + ": bad number '" +
                               cell + "'");
            // from_chars leaves v untouched for subnormals; strtod gives the denormal value
            if (ec == std::errc::result_out_of_range)
                v = std::strtod(cell.c_str(), nullptr);
            r.push_back(v);
        }
        if (r.size() != columns)
            throw io_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                           std::to_string(columns) + " columns");
        rows.push_back(std::move(r));
    }
    if (!seen_header)
        throw io_error(path.string() + ": missing header");
    return rows;
}

inline nlohmann::json read_json(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw io_error("cannot open " + path.string());
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw io_error(path.string() + ": " + e.what());
    }
}

} // namespace detail

inline constexpr const char* halfline_header = "xi,re,im";
inline constexpr const char* model_element_header = "mu,re_plus,im_plus,re_minus,im_minus";
inline constexpr const char* model_sweep_header = "mu,re_fpm,im_fpm,re_fmp,im_fmp,norm";
inline constexpr const char* resolvent_header = "re_z,im_z,lower,upper,numeric";
inline constexpr const char* eigencurve_header =
    "mu,re_zeta_plus,im_zeta_plus,re_zeta_minus,im_zeta_minus";
inline constexpr const char* witness_header = "delta,dist,resolvent,product";

inline std::string halfline_csv(const halfline_function& x)
{
    csv_writer w(halfline_header);
    for (std::size_t k = 0; k < x.size(); ++k)
        w.row(x.grid().xi(k), x[k].real(), x[k].imag());
    return w.str();
}

inline void save_halfline(const halfline_function& x, const std::filesystem::path& csv)
{
    const auto& g = x.grid();
    nlohmann::json side = {{"eta_min", g.eta_min()}, {"eta_max", g.eta_max()}, {"n", g.size()}};
    write_atomic(sidecar_path(csv), side.dump(2) + "\n");
    write_atomic(csv, halfline_csv(x));
}

/// Loads samples against the grid declared in the JSON sidecar; the xi column
/// must agree with the grid nodes.
inline halfline_function load_halfline(const std::filesystem::path& csv)
{
    const auto side = detail::read_json(sidecar_path(csv));
    log_grid g = [&] {
        try {
            return log_grid(side.at("eta_min").get<double>(), side.at("eta_max").get<double>(),
                            side.at("n").get<std::size_t>());
        } catch (const nlohmann::json::exception& e) {
            throw io_error(sidecar_path(csv).string() + ": " + e.what());
        }
    }();
    const auto rows = detail::read_numeric_csv(csv, halfline_header, 3);
    if (rows.size() != g.size())
        throw io_error(csv.string() + ": row count differs from sidecar n");
    std::vector<cplx> v(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (std::fabs(rows[k][0] - g.xi(k)) > 1e-12 * g.xi(k))
            throw io_error(csv.string() + ": xi column does not match the declared grid");
        v[k] = cplx(rows[k][1], rows[k][2]);
    }
    return halfline_function(g, std::move(v));
}

inline std::string model_element_csv(const model_element& phi)
{
    csv_writer w(model_element_header);
    for (std::size_t j = 0; j < phi.size(); ++j)
        w.row(phi.grid().mu(j), phi.plus()[j].real(), phi.plus()[j].imag(),
              phi.minus()[j].real(), phi.minus()[j].imag());
    return w.str();
}

inline void save_model_element(const model_element& phi, const std::filesystem::path& csv)
{
    nlohmann::json side = {{"mu_max", phi.grid().mu_max()}, {"m", phi.grid().size()}};
    write_atomic(sidecar_path(csv), side.dump(2) + "\n");
    write_atomic(csv, model_element_csv(phi));
}

inline model_element load_model_element(const std::filesystem::path& csv)
{
    const auto side = detail::read_json(sidecar_path(csv));
    mu_grid g = [&] {
        try {
            return mu_grid(side.at("mu_max").get<double>(), side.at("m").get<std::size_t>());
        } catch (const nlohmann::json::exception& e) {
            throw io_error(sidecar_path(csv).string() + ": " + e.what());
        }
    }();
    const auto rows = detail::read_numeric_csv(csv, model_element_header, 5);
    if (rows.size() != g.size())
        throw io_error(csv.string() + ": row count differs from sidecar m");
    std::vector<cplx> p(g.size()), m(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (std::fabs(rows[j][0] - g.mu(j)) > 1e-12 * (1.0 + g.mu(j)))
            throw io_error(csv.string() + ": mu column does not match the declared grid");
        p[j] = cplx(rows[j][1], rows[j][2]);
        m[j] = cplx(rows[j][3], rows[j][4]);
    }
    return model_element(g, std::move(p), std::move(m));
}

inline std::string model_sweep_csv(const mu_grid& g)
{
    csv_writer w(model_sweep_header);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const auto f = model_matrix(g.mu(j));
        w.row(g.mu(j), f.f_plus_minus.real(), f.f_plus_minus.imag(), f.f_minus_plus.real(),
              f.f_minus_plus.imag(), matrix_norm(g.mu(j)));
    }
    return w.str();
}

inline std::string eigencurve_csv(const mu_grid& g)
{
    csv_writer w(eigencurve_header);
    const cplx ep = spectrum_segment::endpoint_plus(), em = spectrum_segment::endpoint_minus();
    w.comment("endpoint_plus=" + fmt17(ep.real()) + "," + fmt17(ep.imag()));
    w.comment("endpoint_minus=" + fmt17(em.real()) + "," + fmt17(em.imag()));
    for (std::size_t j = 0; j < g.size(); ++j) {
        const auto [p, m] = eigenvalues(g.mu(j));
        w.row(g.mu(j), p.real(), p.imag(), m.real(), m.imag());
    }
    return w.str();
}

inline std::string resolvent_csv(const std::vector<resolvent_bounds>& rows)
{
    csv_writer w(resolvent_header);
    for (const auto& b : rows)
        w.row(b.z.real(), b.z.imag(), b.lower, b.upper,
              b.numeric.value_or(std::numeric_limits<double>::quiet_NaN()));
    return w.str();
}

inline std::string witness_csv(const witness_table& t)
{
    csv_writer w(witness_header);
    if (t.slope)
        w.comment("loglog_slope=" + fmt17(*t.slope));
    for (const auto& r : t.rows)
        w.row(r.delta, r.dist, r.resolvent, r.product);
    return w.str();
}

} // namespace tfmodel
