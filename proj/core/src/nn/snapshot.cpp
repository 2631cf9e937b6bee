#include "least/nn/snapshot.hpp"

#include <fstream>

#include "least/errors.hpp"

namespace least::nn {

namespace {

constexpr int kSnapshotVersion = 1;

const char* activation_name(OutputActivation a) {
  return a == OutputActivation::kTanh ? "tanh" : "none";
}

OutputActivation activation_from_name(const std::string& name) {
  if (name == "tanh") return OutputActivation::kTanh;
  if (name == "none") return OutputActivation::kNone;
  throw FormatError("unknown output activation '" + name + "'");
}

}  // namespace

nlohmann::json to_json(const Mlp& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (int k = 0; k < net.num_layers(); ++k) {
    const auto w = net.weight(k);
    std::vector<double> rows;
    rows.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) rows.push_back(w(i, j));
    }
    const auto b = net.bias(k);
    layers.push_back({{"weight", rows}, {"bias", std::vector<double>(b.begin(), b.end())}});
  }
  return {{"format", "least-mlp"},
          {"version", kSnapshotVersion},
          {"layer_dims", net.layer_dims()},
          {"output_activation", activation_name(net.output_activation())},
          {"layers", layers}};
}

Mlp mlp_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "least-mlp") throw FormatError("not a least-mlp snapshot");
    if (j.at("version").get<int>() != kSnapshotVersion) throw FormatError("unsupported snapshot version");
    Mlp net(j.at("layer_dims").get<std::vector<int>>(),
            activation_from_name(j.at("output_activation").get<std::string>()));
    const auto& layers = j.at("layers");
    if (static_cast<int>(layers.size()) != net.num_layers()) {
      throw FormatError("snapshot layer count does not match layer_dims");
    }
    for (int k = 0; k < net.num_layers(); ++k) {
      const auto rows = layers[k].at("weight").get<std::vector<double>>();
      const auto bias = layers[k].at("bias").get<std::vector<double>>();
      auto w = net.weight(k);
      auto b = net.bias(k);
      if (static_cast<Eigen::Index>(rows.size()) != w.size() ||
          static_cast<Eigen::Index>(bias.size()) != b.size()) {
        throw FormatError("snapshot layer " + std::to_string(k) + " has the wrong size");
      }
      std::size_t idx = 0;
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(i, c) = rows[idx++];
      }
      for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = bias[static_cast<std::size_t>(i)];
    }
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed Mlp snapshot: ") + e.what());
  }
}

nlohmann::json to_json(const AdamState& state) {
  const auto& m = state.first_moment;
  const auto& v = state.second_moment;
  return {{"learning_rate", state.config.learning_rate},
          {"beta1", state.config.beta1},
          {"beta2", state.config.beta2},
          {"epsilon", state.config.epsilon},
          {"step_count", state.step_count},
          {"first_moment", std::vector<double>(m.begin(), m.end())},
          {"second_moment", std::vector<double>(v.begin(), v.end())}};
}

AdamState adam_from_json(const nlohmann::json& j) {
  try {
    AdamConfig cfg{j.at("learning_rate").get<double>(), j.at("beta1").get<double>(),
                   j.at("beta2").get<double>(), j.at("epsilon").get<double>()};
    const auto m = j.at("first_moment").get<std::vector<double>>();
    const auto v = j.at("second_moment").get<std::vector<double>>();
    if (m.size() != v.size()) throw FormatError("Adam moments differ in length");
    AdamState state = AdamState::zeros(m.size(), cfg);
    state.first_moment = Eigen::Map<const Eigen::VectorXd>(m.data(), static_cast<Eigen::Index>(m.size()));
    state.second_moment = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    state.step_count = j.at("step_count").get<std::int64_t>();
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed Adam snapshot: ") + e.what());
  }
}

void save_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << j.dump(1) << '\n';
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace least::nn
