#include "gsparse/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include "json.hpp"

#include "gsparse/error.hpp"

namespace gsparse {

using nlohmann::json;

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::Parse, fmt::format("'{}' must be a 3-array", what));
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json parse_config(const std::string& text) {
    if (text.empty()) return json::object();
    return json::parse(text);
}

void write_config_header(std::ostream& out, const std::string& config_json) {
    out << "# config: " << (config_json.empty() ? std::string("{}") : parse_config(config_json).dump()) << '\n';
}

}  // namespace

void write_model(std::ostream& out, const RbfModel& model, const ModelMetadata& meta) {
    json doc;
    doc["format"] = kModelFormat;
    doc["version"] = kModelFormatVersion;
    json m;
    m["source"] = meta.source;
    m["atom_count"] = meta.atom_count;
    m["decay"] = meta.decay;
    m["isovalue"] = meta.isovalue;
    m["iterations"] = meta.iterations;
    m["sparse_iterations"] = meta.sparse_iterations;
    if (meta.box) m["box"] = {{"min", vec_json(meta.box->min)}, {"max", vec_json(meta.box->max)}};
    m["config"] = parse_config(meta.config_json);
    doc["metadata"] = std::move(m);
    json bases = json::array();
    for (const auto& b : model.bases) {
        bases.push_back({{"weight", b.weight()},
                         {"decays", vec_json(b.decays())},
                         {"center", vec_json(b.center)},
                         {"angles", json::array({b.angles.alpha, b.angles.beta, b.angles.gamma})}});
    }
    doc["bases"] = std::move(bases);
    out << doc.dump(2) << '\n';
}

std::pair<RbfModel, ModelMetadata> read_model(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, fmt::format("model file is not valid JSON: {}", e.what()));
    }
    try {
        if (doc.value("format", "") != kModelFormat) throw Error(ErrorKind::Parse, "not an ellipsoid RBF model file");
        const int version = doc.value("version", 0);
        if (version != kModelFormatVersion)
            throw Error(ErrorKind::Parse, fmt::format("unsupported model format version {}", version));

        ModelMetadata meta;
        const json& m = doc.at("metadata");
        meta.source = m.value("source", "");
        meta.atom_count = m.value("atom_count", std::size_t{0});
        meta.decay = m.at("decay").get<double>();
        meta.isovalue = m.at("isovalue").get<double>();
        meta.iterations = m.value("iterations", 0);
        meta.sparse_iterations = m.value("sparse_iterations", 0);
        if (m.contains("box")) meta.box = Box{vec_from(m["box"].at("min"), "min"), vec_from(m["box"].at("max"), "max")};
        if (m.contains("config")) meta.config_json = m["config"].dump();

        RbfModel model;
        for (const json& jb : doc.at("bases")) {
            const double weight = jb.at("weight").get<double>();
            const Vec3 decays = vec_from(jb.at("decays"), "decays");
            if (!(weight >= 0.0) || !std::isfinite(weight) || !(decays.array() >= 0.0).all() || !decays.allFinite())
                throw Error(ErrorKind::Validation, "model weights and decays must be finite and non-negative");
            EllipsoidRbf b;
            // sqrt(fl(x*x)) == |x| in binary floating point, so the effective
            // values survive the round trip exactly.
            b.coeff_sqrt = std::sqrt(weight);
            b.decay_sqrt = decays.cwiseSqrt();
            b.center = vec_from(jb.at("center"), "center");
            const Vec3 ang = vec_from(jb.at("angles"), "angles");
            b.angles = {ang.x(), ang.y(), ang.z()};
            model.bases.push_back(b);
        }
        return {std::move(model), std::move(meta)};
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, fmt::format("malformed model file: {}", e.what()));
    }
}

void save_model(const std::filesystem::path& path, const RbfModel& model, const ModelMetadata& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, fmt::format("cannot write '{}'", path.string()));
    write_model(out, model, meta);
}

std::pair<RbfModel, ModelMetadata> load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open '{}'", path.string()));
    return read_model(in);
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace, const std::string& config_json) {
    write_config_header(out, config_json);
    out << "iter,f,Es,El1,ws,wl,nbasis,tau\n";
    for (const auto& r : trace.records)
        out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g}\n", r.iter, r.f, r.es, r.el1, r.ws,
                           r.wl, r.nbasis, r.tau);
}

void write_weights(std::ostream& out, const RbfModel& model, const std::string& config_json) {
    write_config_header(out, config_json);
    for (const auto& b : model.bases) out << fmt::format("{:.17g}\n", b.weight());
}

std::string report_json(const SurfaceReport& r, const std::string& config_json) {
    json doc;
    doc["A_original"] = r.area_original;
    doc["A_our"] = r.area_ours;
    doc["Error_A"] = r.error_area;
    doc["V_original"] = r.volume_original;
    doc["V_our"] = r.volume_ours;
    doc["Error_V"] = r.error_volume;
    doc["H"] = r.hausdorff;
    if (!config_json.empty()) doc["config"] = parse_config(config_json);
    return doc.dump(2) + "\n";
}

}  // namespace gsparse
