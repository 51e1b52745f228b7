#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bjj/params.hpp"

namespace bjj::io {

// RFC-4180 CSV: header row, quoted fields when needed, numbers at full
// round-trip precision so identical runs produce identical bytes.
class Csv {
  public:
    explicit Csv(std::vector<std::string> header);
    void row(const std::vector<std::string>& fields);
    void row_values(const std::vector<double>& values);
    std::string str() const { return body_; }
    static std::string format(double v);

  private:
    size_t width_;
    std::string body_;
};

// Write via a temp file and rename, so readers never see partial output.
void atomic_write(const std::string& path, const std::string& content);

void ensure_dir(const std::string& path);

// Common sidecar skeleton: parameters, derived constants, code version,
// fitted-constants provenance.  Callers add run-specific fields and attach
// wall time before writing.
nlohmann::json sidecar_base(const DimerParams& p);
void write_sidecar(const std::string& path, nlohmann::json j, double wall_seconds);

}  // namespace bjj::io
