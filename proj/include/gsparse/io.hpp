#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "gsparse/erbf_model.hpp"
#include "gsparse/mesh.hpp"
#include "gsparse/optimizer.hpp"

namespace gsparse {

inline constexpr const char* kModelFormat = "gsparse-erbf-model";
inline constexpr int kModelFormatVersion = 1;

struct ModelMetadata {
    std::string source;             // molecule path
    std::size_t atom_count = 0;
    double decay = 0.5;
    double isovalue = 1.0;
    int iterations = 0;             // iterations actually run
    int sparse_iterations = 0;
    std::optional<Box> box;         // sampling box, reused for meshing
    std::string config_json;        // full effective run configuration (JSON object text)
};

/// JSON document: per basis the effective weight c~^2, effective decays d~^2,
/// centre and angles. Doubles are written in shortest round-trip form, so
/// reading back reproduces every stored value bit for bit.
void write_model(std::ostream& out, const RbfModel& model, const ModelMetadata& meta);
std::pair<RbfModel, ModelMetadata> read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const RbfModel& model, const ModelMetadata& meta);
std::pair<RbfModel, ModelMetadata> load_model(const std::filesystem::path& path);

/// `# config: <json>` header, then iter,f,Es,El1,ws,wl,nbasis,tau rows.
void write_trace_csv(std::ostream& out, const IterationTrace& trace, const std::string& config_json = {});

/// `# config: <json>` header, then one effective weight c~^2 per line.
void write_weights(std::ostream& out, const RbfModel& model, const std::string& config_json = {});

std::string report_json(const SurfaceReport& report, const std::string& config_json = {});

}  // namespace gsparse
