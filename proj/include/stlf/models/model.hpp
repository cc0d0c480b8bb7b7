#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "stlf/models/gbrt.hpp"
#include "stlf/models/mlp.hpp"
#include "stlf/models/svr.hpp"
#include "stlf/timeseries.hpp"

namespace stlf {

enum class ModelKind { Svr, Gbrt, Mlp };

std::string_view to_string(ModelKind k) noexcept;  // "svr", "gbrt", "mlp"
ModelKind parse_model_kind(std::string_view text);
inline constexpr ModelKind kAllModelKinds[] = {ModelKind::Svr, ModelKind::Gbrt, ModelKind::Mlp};

using ModelConfig = std::variant<SvrConfig, GbrtConfig, MlpConfig>;
using ModelParams = std::variant<LinearSvr, BoostedTrees, Perceptron>;

ModelKind kind_of(const ModelConfig& config) noexcept;
ModelConfig default_config(ModelKind kind);
void validate(const ModelConfig& config);
/// Overwrites the seed of seeded configs (GBRT, MLP); SVR has none.
void set_seed(ModelConfig& config, std::uint64_t seed);

class TrainedModel {
 public:
  TrainedModel(std::vector<std::string> features, ModelConfig config, ModelParams params, TrainingInfo info);

  ModelKind kind() const noexcept { return kind_of(config_); }
  const std::vector<std::string>& features() const noexcept { return features_; }
  const ModelConfig& config() const noexcept { return config_; }
  const ModelParams& params() const noexcept { return params_; }
  const TrainingInfo& info() const noexcept { return info_; }

  /// Columns must be in training order.
  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
  /// Column names and order must match training; the error names the columns.
  Eigen::VectorXd predict(const FeatureMatrix& matrix) const;

 private:
  std::vector<std::string> features_;
  ModelConfig config_;
  ModelParams params_;
  TrainingInfo info_;
};

/// Default names are x0, x1, ... when `features` is empty.
TrainedModel train_svr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvrConfig& config,
                       std::vector<std::string> features = {});
TrainedModel train_gbrt(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GbrtConfig& config,
                        std::vector<std::string> features = {});
TrainedModel train_mlp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const MlpConfig& config,
                       std::vector<std::string> features = {});
TrainedModel train_model(const ModelConfig& config, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         std::vector<std::string> features = {});
TrainedModel train_model(const ModelConfig& config, const FeatureMatrix& matrix);

/// Self-describing JSON: format tag, version, kind, features, config, scalers,
/// parameters and training metadata.
inline constexpr int kModelFormatVersion = 1;
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(std::string_view text);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

/// JSON object text of a config, and the reverse (missing keys keep defaults).
std::string config_to_json(const ModelConfig& config);
ModelConfig config_from_json(ModelKind kind, std::string_view text);

}  // namespace stlf
