#include "stlf/models/model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stlf/error.hpp"

namespace stlf {

using nlohmann::json;

std::string_view to_string(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::Svr: return "svr";
    case ModelKind::Gbrt: return "gbrt";
    case ModelKind::Mlp: return "mlp";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "svr") return ModelKind::Svr;
  if (text == "gbrt") return ModelKind::Gbrt;
  if (text == "mlp") return ModelKind::Mlp;
  throw ParameterError("unknown model kind '" + std::string(text) + "' (expected svr, gbrt or mlp)");
}

ModelKind kind_of(const ModelConfig& config) noexcept { return static_cast<ModelKind>(config.index()); }

ModelConfig default_config(ModelKind kind) {
  switch (kind) {
    case ModelKind::Svr: return SvrConfig{};
    case ModelKind::Gbrt: return GbrtConfig{};
    case ModelKind::Mlp: return MlpConfig{};
  }
  throw ParameterError("unknown model kind");
}

void validate(const ModelConfig& config) {
  std::visit([](const auto& c) { c.validate(); }, config);
}

void set_seed(ModelConfig& config, std::uint64_t seed) {
  if (auto* g = std::get_if<GbrtConfig>(&config)) g->seed = seed;
  if (auto* m = std::get_if<MlpConfig>(&config)) m->seed = seed;
}

TrainedModel::TrainedModel(std::vector<std::string> features, ModelConfig config, ModelParams params,
                           TrainingInfo info)
    : features_(std::move(features)), config_(std::move(config)), params_(std::move(params)), info_(std::move(info)) {
  if (config_.index() != params_.index()) throw ParameterError("model: config and parameters are of different kinds");
}

Eigen::VectorXd TrainedModel::predict(const Eigen::MatrixXd& x) const {
  if (x.cols() != static_cast<Eigen::Index>(features_.size()))
    throw SchemaError("model expects " + std::to_string(features_.size()) + " columns, got " +
                      std::to_string(x.cols()));
  return std::visit([&](const auto& p) { return stlf::predict(p, x); }, params_);
}

Eigen::VectorXd TrainedModel::predict(const FeatureMatrix& matrix) const {
  const auto names = matrix.names();
  if (names != features_) {
    std::string missing, extra;
    for (const auto& f : features_)
      if (std::find(names.begin(), names.end(), f) == names.end()) missing += (missing.empty() ? "" : ", ") + f;
    for (const auto& f : names)
      if (std::find(features_.begin(), features_.end(), f) == features_.end()) extra += (extra.empty() ? "" : ", ") + f;
    std::string msg = "input columns do not match the model";
    if (!missing.empty()) msg += "; missing: " + missing;
    if (!extra.empty()) msg += "; unexpected: " + extra;
    if (missing.empty() && extra.empty()) msg += "; same columns in a different order";
    msg += " (rebuild the matrix with the catalog used for training)";
    throw SchemaError(msg);
  }
  return predict(matrix.values());
}

namespace {

std::vector<std::string> default_names(std::vector<std::string> names, Eigen::Index cols) {
  if (names.empty()) {
    for (Eigen::Index j = 0; j < cols; ++j) names.push_back("x" + std::to_string(j));
  }
  if (static_cast<Eigen::Index>(names.size()) != cols)
    throw ParameterError("feature name count does not match the column count");
  return names;
}

}  // namespace

TrainedModel train_svr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvrConfig& config,
                       std::vector<std::string> features) {
  auto names = default_names(std::move(features), x.cols());
  TrainingInfo info;
  LinearSvr p = fit_linear_svr(x, y, config, &info);
  return {std::move(names), config, std::move(p), std::move(info)};
}

TrainedModel train_gbrt(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GbrtConfig& config,
                        std::vector<std::string> features) {
  auto names = default_names(std::move(features), x.cols());
  TrainingInfo info;
  BoostedTrees p = fit_boosted_trees(x, y, config, &info);
  return {std::move(names), config, std::move(p), std::move(info)};
}

TrainedModel train_mlp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const MlpConfig& config,
                       std::vector<std::string> features) {
  auto names = default_names(std::move(features), x.cols());
  TrainingInfo info;
  Perceptron p = fit_perceptron(x, y, config, &info);
  return {std::move(names), config, std::move(p), std::move(info)};
}

TrainedModel train_model(const ModelConfig& config, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         std::vector<std::string> features) {
  return std::visit(
      [&](const auto& c) -> TrainedModel {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, SvrConfig>) return train_svr(x, y, c, std::move(features));
        else if constexpr (std::is_same_v<C, GbrtConfig>) return train_gbrt(x, y, c, std::move(features));
        else return train_mlp(x, y, c, std::move(features));
      },
      config);
}

TrainedModel train_model(const ModelConfig& config, const FeatureMatrix& matrix) {
  return train_model(config, matrix.values(), matrix.target().values(), matrix.names());
}

// ---- serialisation ----

namespace {

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd json_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json scaler_json(const StandardScaler& s) { return {{"mean", vec_json(s.mean())}, {"scale", vec_json(s.scale())}}; }
StandardScaler json_scaler(const json& j) { return {json_vec(j.at("mean")), json_vec(j.at("scale"))}; }

json config_json(const ModelConfig& config) {
  return std::visit(
      [](const auto& c) -> json {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, SvrConfig>)
          return {{"c", c.c}, {"epsilon", c.epsilon}, {"max_iters", c.max_iters}, {"tolerance", c.tolerance}};
        else if constexpr (std::is_same_v<C, GbrtConfig>)
          return {{"n_trees", c.n_trees},
                  {"learning_rate", c.learning_rate},
                  {"max_depth", c.max_depth},
                  {"min_samples_leaf", c.min_samples_leaf},
                  {"seed", c.seed}};
        else
          return {{"hidden_sizes", c.hidden_sizes},
                  {"max_iters", c.max_iters},
                  {"tolerance", c.tolerance},
                  {"l2_weight", c.l2_weight},
                  {"seed", c.seed}};
      },
      config);
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("model config: '") + key + "' has the wrong type");
  }
}

ModelConfig json_config(ModelKind kind, const json& j) {
  if (!j.is_object()) throw ConfigError("model config must be a JSON object");
  static const std::vector<std::string> svr_keys{"c", "epsilon", "max_iters", "tolerance"};
  static const std::vector<std::string> gbrt_keys{"n_trees", "learning_rate", "max_depth", "min_samples_leaf", "seed"};
  static const std::vector<std::string> mlp_keys{"hidden_sizes", "max_iters", "tolerance", "l2_weight", "seed"};
  const auto& keys = kind == ModelKind::Svr ? svr_keys : kind == ModelKind::Gbrt ? gbrt_keys : mlp_keys;
  for (const auto& [k, v] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      throw ConfigError("unknown " + std::string(to_string(kind)) + " parameter '" + k + "'");
  ModelConfig out = default_config(kind);
  if (auto* c = std::get_if<SvrConfig>(&out)) {
    read_opt(j, "c", c->c);
    read_opt(j, "epsilon", c->epsilon);
    read_opt(j, "max_iters", c->max_iters);
    read_opt(j, "tolerance", c->tolerance);
  } else if (auto* g = std::get_if<GbrtConfig>(&out)) {
    read_opt(j, "n_trees", g->n_trees);
    read_opt(j, "learning_rate", g->learning_rate);
    read_opt(j, "max_depth", g->max_depth);
    read_opt(j, "min_samples_leaf", g->min_samples_leaf);
    read_opt(j, "seed", g->seed);
  } else if (auto* m = std::get_if<MlpConfig>(&out)) {
    read_opt(j, "hidden_sizes", m->hidden_sizes);
    read_opt(j, "max_iters", m->max_iters);
    read_opt(j, "tolerance", m->tolerance);
    read_opt(j, "l2_weight", m->l2_weight);
    read_opt(j, "seed", m->seed);
  }
  try {
    validate(out);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  return out;
}

json params_json(const ModelParams& params) {
  return std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LinearSvr>) {
          return {{"scaler", scaler_json(p.x_scaler)},
                  {"y_mean", p.y_mean},
                  {"y_scale", p.y_scale},
                  {"weights", vec_json(p.weights)},
                  {"bias", p.bias}};
        } else if constexpr (std::is_same_v<P, BoostedTrees>) {
          json trees = json::array();
          for (const auto& t : p.trees) {
            json nodes = json::array();
            for (const auto& nd : t.nodes) nodes.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.value});
            trees.push_back(std::move(nodes));
          }
          return {{"n_features", p.n_features}, {"base", p.base}, {"learning_rate", p.learning_rate}, {"trees", trees}};
        } else {
          return {{"layer_sizes", p.layer_sizes},
                  {"scaler", scaler_json(p.x_scaler)},
                  {"y_mean", p.y_mean},
                  {"y_scale", p.y_scale},
                  {"params", vec_json(p.params)}};
        }
      },
      params);
}

ModelParams json_params(ModelKind kind, const json& j) {
  switch (kind) {
    case ModelKind::Svr: {
      LinearSvr p;
      p.x_scaler = json_scaler(j.at("scaler"));
      p.y_mean = j.at("y_mean").get<double>();
      p.y_scale = j.at("y_scale").get<double>();
      p.weights = json_vec(j.at("weights"));
      p.bias = j.at("bias").get<double>();
      return p;
    }
    case ModelKind::Gbrt: {
      BoostedTrees p;
      p.n_features = j.at("n_features").get<Eigen::Index>();
      p.base = j.at("base").get<double>();
      p.learning_rate = j.at("learning_rate").get<double>();
      for (const auto& jt : j.at("trees")) {
        RegressionTree t;
        for (const auto& jn : jt) {
          RegressionTree::Node nd{jn.at(0).get<int>(), jn.at(1).get<double>(), jn.at(2).get<int>(),
                                  jn.at(3).get<int>(), jn.at(4).get<double>()};
          t.nodes.push_back(nd);
        }
        const int count = static_cast<int>(t.nodes.size());
        if (count == 0) throw SchemaError("model file: empty tree");
        for (const auto& nd : t.nodes)
          if (nd.feature >= 0 && (nd.feature >= p.n_features || nd.left <= 0 || nd.right <= 0 || nd.left >= count ||
                                  nd.right >= count))
            throw SchemaError("model file: malformed tree node");
        p.trees.push_back(std::move(t));
      }
      return p;
    }
    case ModelKind::Mlp: {
      Perceptron p;
      p.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
      p.x_scaler = json_scaler(j.at("scaler"));
      p.y_mean = j.at("y_mean").get<double>();
      p.y_scale = j.at("y_scale").get<double>();
      p.params = json_vec(j.at("params"));
      if (p.layer_sizes.size() < 2 || p.params.size() != mlp_parameter_count(p.layer_sizes))
        throw SchemaError("model file: parameter count does not match the layer sizes");
      return p;
    }
  }
  throw SchemaError("model file: unknown kind");
}

}  // namespace

std::string config_to_json(const ModelConfig& config) { return config_json(config).dump(); }

ModelConfig config_from_json(ModelKind kind, std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("model config: ") + e.what());
  }
  return json_config(kind, j);
}

std::string model_to_json(const TrainedModel& model) {
  const auto& info = model.info();
  json j = {{"format", "stlf-model"},
            {"version", kModelFormatVersion},
            {"kind", std::string(to_string(model.kind()))},
            {"features", model.features()},
            {"config", config_json(model.config())},
            {"params", params_json(model.params())},
            {"training",
             {{"initial_loss", info.initial_loss},
              {"final_loss", info.final_loss},
              {"iterations", info.iterations},
              {"converged", info.converged},
              {"warning", info.warning},
              {"message", info.message}}}};
  return j.dump(1) + "\n";
}

TrainedModel model_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "stlf-model") throw SchemaError("not an stlf model file");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion)
      throw SchemaError("model file version " + std::to_string(version) + " is not supported (expected " +
                        std::to_string(kModelFormatVersion) + ")");
    const ModelKind kind = parse_model_kind(j.at("kind").get<std::string>());
    auto features = j.at("features").get<std::vector<std::string>>();
    ModelConfig config = json_config(kind, j.at("config"));
    ModelParams params = json_params(kind, j.at("params"));
    TrainingInfo info;
    const auto& jt = j.at("training");
    info.initial_loss = jt.at("initial_loss").get<double>();
    info.final_loss = jt.at("final_loss").get<double>();
    info.iterations = jt.at("iterations").get<int>();
    info.converged = jt.at("converged").get<bool>();
    info.warning = jt.at("warning").get<bool>();
    info.message = jt.at("message").get<std::string>();
    const auto p = static_cast<Eigen::Index>(features.size());
    const bool width_ok = std::visit(
        [&](const auto& q) {
          using Q = std::decay_t<decltype(q)>;
          if constexpr (std::is_same_v<Q, BoostedTrees>) return q.n_features == p;
          else if constexpr (std::is_same_v<Q, LinearSvr>) return q.x_scaler.size() == p && q.weights.size() == p;
          else return q.x_scaler.size() == p && q.layer_sizes.front() == p;
        },
        params);
    if (!width_ok) throw SchemaError("model file: parameter shapes do not match the feature list");
    return {std::move(features), std::move(config), std::move(params), std::move(info)};
  } catch (const json::exception& e) {
    throw SchemaError(std::string("model file is malformed: ") + e.what());
  } catch (const ParameterError& e) {
    throw SchemaError(std::string("model file is malformed: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file " + path.string());
  out << model_to_json(model);
  if (!out) throw Error("failed writing model file " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace stlf
