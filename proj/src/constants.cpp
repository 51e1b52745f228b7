#include "bjj/constants.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "bjj/errors.hpp"

namespace bjj::constants {

Fitted load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("constants: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("constants: bad JSON in " + path + ": " + e.what());
    }
    Fitted f;
    f.version = j.value("version", 1);
    f.phase_diffusion_prefactor = j.value("phase_diffusion_prefactor", f.phase_diffusion_prefactor);
    f.separatrix_log_b = j.value("separatrix_log_b", f.separatrix_log_b);
    f.source = path;
    return f;
}

void write_file(const std::string& path, const Fitted& values) {
    nlohmann::json j{
        {"version", values.version},
        {"phase_diffusion_prefactor", values.phase_diffusion_prefactor},
        {"separatrix_log_b", values.separatrix_log_b},
    };
    std::ofstream out(path);
    if (!out) throw ConfigError("constants: cannot write " + path);
    out << j.dump(2) << "\n";
}

const Fitted& fitted() {
    static const Fitted value = [] {
        if (const char* env = std::getenv("BJJ_CONSTANTS_FILE")) return load_file(env);
        for (const char* rel : {"data/fitted_constants.json", "../data/fitted_constants.json"})
            if (std::filesystem::exists(rel)) return load_file(rel);
        Fitted f;
        f.source = "builtin";
        return f;
    }();
    return value;
}

}  // namespace bjj::constants
