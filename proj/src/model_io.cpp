#include "d2d/model_io.hpp"

#include <fstream>
#include <string>

#include <json.hpp>

#include "d2d/errors.hpp"

namespace d2d {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "d2d-dqn-model";

[[noreturn]] void malformed(const std::string& source, const std::string& why) {
  throw IoError(source + ": malformed model file: " + why);
}

}  // namespace

void write_model(std::ostream& out, const SavedModel& saved) {
  json doc;
  doc["format"] = kFormatTag;
  doc["version"] = kModelFormatVersion;
  doc["seed"] = saved.model.seed;
  doc["independent"] = saved.model.independent;
  doc["power_levels_dbm"] = saved.power_levels_dbm;
  json nets = json::array();
  for (const Mlp& net : saved.model.networks) {
    json layers = json::array();
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
      const auto w = net.weights(l);
      const auto b = net.biases(l);
      layers.push_back({{"in", net.layer_dims()[l]},
                        {"out", net.layer_dims()[l + 1]},
                        {"weights", std::vector<double>(w.begin(), w.end())},
                        {"biases", std::vector<double>(b.begin(), b.end())}});
    }
    nets.push_back({{"layer_dims", net.layer_dims()}, {"layers", std::move(layers)}});
  }
  doc["networks"] = std::move(nets);
  out << doc.dump(1) << '\n';
}

void write_model(const SavedModel& saved, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_model(out, saved);
  out.flush();
  if (!out) throw IoError("failed writing model to '" + path.string() + "'");
}

SavedModel read_model(std::istream& in, const std::string& source) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    malformed(source, e.what());
  }
  SavedModel saved;
  try {
    if (doc.at("format").get<std::string>() != kFormatTag) malformed(source, "wrong format tag");
    if (doc.at("version").get<int>() != kModelFormatVersion) {
      malformed(source, "unsupported version " + doc.at("version").dump());
    }
    saved.model.seed = doc.at("seed").get<std::uint64_t>();
    saved.model.independent = doc.at("independent").get<bool>();
    saved.power_levels_dbm = doc.at("power_levels_dbm").get<std::vector<double>>();
    for (const json& jn : doc.at("networks")) {
      Mlp net(jn.at("layer_dims").get<std::vector<std::size_t>>());
      const json& layers = jn.at("layers");
      if (layers.size() != net.num_layers()) malformed(source, "layer count disagrees with layer_dims");
      for (std::size_t l = 0; l < net.num_layers(); ++l) {
        const auto w = layers[l].at("weights").get<std::vector<double>>();
        const auto b = layers[l].at("biases").get<std::vector<double>>();
        auto dw = net.weights(l);
        auto db = net.biases(l);
        if (w.size() != dw.size() || b.size() != db.size()) {
          malformed(source, "parameter array size mismatch in layer " + std::to_string(l));
        }
        std::copy(w.begin(), w.end(), dw.begin());
        std::copy(b.begin(), b.end(), db.begin());
      }
      saved.model.networks.push_back(std::move(net));
    }
  } catch (const json::exception& e) {
    malformed(source, e.what());
  } catch (const ShapeError& e) {
    malformed(source, e.what());
  }
  if (saved.model.networks.empty()) malformed(source, "no networks");
  return saved;
}

SavedModel read_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model '" + path.string() + "'");
  return read_model(in, path.string());
}

}  // namespace d2d
