#include "snds/mixture_io.hpp"

#include <fstream>

#include "snds/errors.hpp"

namespace snds {

namespace {

Eigen::MatrixXd covariance_from_json(const nlohmann::json& j, int dim, std::size_t index) {
  const std::string where = "covariances[" + std::to_string(index) + "]";
  if (j.is_number()) {
    const double s2 = j.get<double>();
    return s2 * Eigen::MatrixXd::Identity(dim, dim);
  }
  if (j.is_array() && !j.empty() && j[0].is_number()) {
    if (static_cast<int>(j.size()) != dim)
      throw ConfigError(where + ": diagonal has " + std::to_string(j.size()) +
                        " entries, expected " + std::to_string(dim));
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) cov(k, k) = j[k].get<double>();
    return cov;
  }
  if (j.is_array() && !j.empty() && j[0].is_array()) {
    if (static_cast<int>(j.size()) != dim)
      throw ConfigError(where + ": matrix has " + std::to_string(j.size()) +
                        " rows, expected " + std::to_string(dim));
    Eigen::MatrixXd cov(dim, dim);
    for (int r = 0; r < dim; ++r) {
      if (static_cast<int>(j[r].size()) != dim)
        throw ConfigError(where + ": row " + std::to_string(r) + " has wrong length");
      for (int c = 0; c < dim; ++c) cov(r, c) = j[r][c].get<double>();
    }
    return cov;
  }
  throw ConfigError(where + ": expected scalar, diagonal vector or matrix");
}

}  // namespace

GaussianMixture mixture_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("weights") || !j.contains("means") ||
      !j.contains("covariances"))
    throw ConfigError("mixture: expected object with weights/means/covariances");

  std::vector<double> weights = j.at("weights").get<std::vector<double>>();
  const auto& jmeans = j.at("means");
  const auto& jcovs = j.at("covariances");
  if (!jmeans.is_array() || jmeans.empty())
    throw ConfigError("mixture: means must be a non-empty array of points");
  if (jmeans.size() != weights.size() || jcovs.size() != weights.size())
    throw ConfigError("mixture: weights/means/covariances must have equal length");

  const int dim = static_cast<int>(jmeans[0].size());
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covs;
  means.reserve(weights.size());
  covs.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto pt = jmeans[i].get<std::vector<double>>();
    if (static_cast<int>(pt.size()) != dim)
      throw ConfigError("mixture: means[" + std::to_string(i) + "] has wrong dimension");
    means.push_back(Eigen::Map<const Eigen::VectorXd>(pt.data(), dim));
    covs.push_back(covariance_from_json(jcovs[i], dim, i));
  }

  try {
    return GaussianMixture(std::move(weights), std::move(means), std::move(covs));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("mixture: ") + e.what());
  }
}

nlohmann::json mixture_to_json(const GaussianMixture& gm) {
  nlohmann::json j;
  j["weights"] = gm.weights();
  auto& means = j["means"] = nlohmann::json::array();
  auto& covs = j["covariances"] = nlohmann::json::array();
  for (int i = 0; i < gm.components(); ++i) {
    std::vector<double> m(gm.mean(i).data(), gm.mean(i).data() + gm.dim());
    means.push_back(m);
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < gm.dim(); ++r) {
      std::vector<double> row(gm.dim());
      for (int c = 0; c < gm.dim(); ++c) row[c] = gm.covariance(i)(r, c);
      rows.push_back(row);
    }
    covs.push_back(rows);
  }
  return j;
}

GaussianMixture load_mixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mixture file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("mixture file " + path + ": " + e.what());
  }
  return mixture_from_json(j);
}

void save_mixture(const GaussianMixture& gm, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write mixture file: " + path);
  out << mixture_to_json(gm).dump(2) << "\n";
}

}  // namespace snds
