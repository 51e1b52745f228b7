#include "bjj/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bjj/constants.hpp"
#include "bjj/errors.hpp"
#include "bjj/version.hpp"

namespace bjj::io {

namespace {

std::string quote_if_needed(const std::string& f) {
    if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

Csv::Csv(std::vector<std::string> header) : width_(header.size()) {
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) body_ += ',';
        body_ += quote_if_needed(header[i]);
    }
    body_ += "\r\n";
}

void Csv::row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw ConfigError("Csv: row width mismatch");
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) body_ += ',';
        body_ += quote_if_needed(fields[i]);
    }
    body_ += "\r\n";
}

void Csv::row_values(const std::vector<double>& values) {
    std::vector<std::string> f;
    f.reserve(values.size());
    for (double v : values) f.push_back(format(v));
    row(f);
}

std::string Csv::format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ConfigError("cannot open for writing: " + tmp);
        out << content;
        if (!out) throw ConfigError("short write: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw ConfigError("cannot create directory " + path + ": " + ec.message());
}

nlohmann::json sidecar_base(const DimerParams& p) {
    nlohmann::json j;
    j["params"] = {{"N", p.N}, {"U", p.U}, {"K", p.K}, {"eps", p.eps}};
    nlohmann::json d;
    d["u"] = p.coupling_u();
    d["eps_scaled"] = p.bias_scaled();
    d["dim"] = p.dim();
    d["planck_cell"] = p.planck_cell();
    d["omega_josephson"] = p.omega_josephson();
    d["omega_rabi"] = p.omega_rabi();
    d["E_minus"] = p.ground_energy();
    d["E_x"] = p.separatrix_energy();
    d["E_plus"] = p.top_energy();
    if (p.coupling_u() > 1.0) {
        d["eps_c"] = std::pow(std::cbrt(p.coupling_u() * p.coupling_u()) - 1.0, 1.5);
        d["omega_separatrix"] = p.omega_separatrix();
    }
    const char* regime = p.regime() == Regime::Rabi      ? "rabi"
                         : p.regime() == Regime::Josephson ? "josephson"
                                                           : "fock";
    d["regime"] = regime;
    j["derived"] = d;
    j["version"] = bjj::kVersion;
    j["fitted_constants"] = {{"source", constants::fitted().source},
                             {"phase_diffusion_prefactor", constants::fitted().phase_diffusion_prefactor},
                             {"separatrix_log_b", constants::fitted().separatrix_log_b}};
    return j;
}

void write_sidecar(const std::string& path, nlohmann::json j, double wall_seconds) {
    j["wall_seconds"] = wall_seconds;
    atomic_write(path, j.dump(2) + "\n");
}

}  // namespace bjj::io
