// Copyright 2026 The sumrefine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sumrefine/embedders.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include <httplib.h>

#include <nlohmann/json.hpp>

namespace sumrefine::metrics {
namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

void normalize_rows(Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double norm = m.row(r).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw PreconditionError("cannot normalize a zero or non-finite embedding row");
    }
    m.row(r) /= norm;
  }
}

Eigen::MatrixXd OneHotEmbedder::embed(Tokens tokens) const {
  std::lock_guard lock(mu_);
  std::vector<Eigen::Index> rows;
  rows.reserve(tokens.size());
  for (const std::string& t : tokens) {
    auto [it, inserted] = index_.try_emplace(t, static_cast<Eigen::Index>(index_.size()));
    rows.push_back(it->second);
  }
  Eigen::MatrixXd out =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(tokens.size()),
                            std::max<Eigen::Index>(1, static_cast<Eigen::Index>(index_.size())));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i), rows[i]) = 1.0;
  return out;
}

std::size_t OneHotEmbedder::vocabulary_size() const {
  std::lock_guard lock(mu_);
  return index_.size();
}

VectorFileEmbedder::VectorFileEmbedder(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read embedding file " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> values;
    double x = 0.0;
    while (fields >> x) values.push_back(x);
    if (!fields.eof()) {
      throw ConfigError("embedding file " + path.string() + " line " + std::to_string(line_no) +
                        ": non-numeric value");
    }
    // "<count> <dim>" header line.
    if (line_no == 1 && values.size() == 1 &&
        token.find_first_not_of("0123456789") == std::string::npos) {
      continue;
    }
    if (values.empty()) {
      throw ConfigError("embedding file " + path.string() + " line " + std::to_string(line_no) +
                        ": token without vector");
    }
    if (dim_ == 0) dim_ = static_cast<Eigen::Index>(values.size());
    if (static_cast<Eigen::Index>(values.size()) != dim_) {
      throw ConfigError("embedding file " + path.string() + " line " + std::to_string(line_no) +
                        ": inconsistent dimension");
    }
    Eigen::MatrixXd row = Eigen::Map<const Eigen::RowVectorXd>(values.data(), dim_);
    normalize_rows(row);
    vectors_[token] = row.row(0).transpose();
  }
  if (dim_ == 0) throw ConfigError("embedding file " + path.string() + " has no vectors");
}

Eigen::VectorXd VectorFileEmbedder::fallback_vector(const std::string& token) const {
  std::uint64_t state = fnv1a(token);
  Eigen::VectorXd v(dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) {
    // Uniform in [-1, 1) from the top 53 bits.
    v(i) = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
  }
  const double norm = v.norm();
  if (norm == 0.0) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / norm;
}

Eigen::MatrixXd VectorFileEmbedder::embed(Tokens tokens) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(tokens.size()), dim_);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = vectors_.find(tokens[i]);
    out.row(static_cast<Eigen::Index>(i)) =
        (it != vectors_.end() ? it->second : fallback_vector(tokens[i])).transpose();
  }
  return out;
}

HttpEmbedder::HttpEmbedder(std::string endpoint_url, std::chrono::duration<double> timeout)
    : timeout_(timeout) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(endpoint_url, m, kUrl)) {
    throw ConfigError("embedding endpoint is not an http(s) URL: " + endpoint_url);
  }
  scheme_host_port_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
}

Eigen::MatrixXd HttpEmbedder::embed(Tokens tokens) const {
  nlohmann::json body = {{"tokens", std::vector<std::string>(tokens.begin(), tokens.end())}};
  httplib::Client client(scheme_host_port_);
  const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(timeout_).count();
  client.set_connection_timeout(usec / 1'000'000, usec % 1'000'000);
  client.set_read_timeout(usec / 1'000'000, usec % 1'000'000);
  auto res = client.Post(path_, body.dump(), "application/json");
  if (!res) {
    throw BackendUnavailableError("embedding endpoint failed: " + httplib::to_string(res.error()),
                                  0);
  }
  if (res->status < 200 || res->status >= 300) throw RequestRejectedError(res->status, res->body);

  nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("vectors") ||
      !doc["vectors"].is_array()) {
    throw ProtocolError("embedding response lacks a \"vectors\" array");
  }
  const auto& rows = doc["vectors"];
  if (rows.size() != tokens.size()) {
    throw ProtocolError("embedding response has " + std::to_string(rows.size()) +
                        " vectors for " + std::to_string(tokens.size()) + " tokens");
  }
  if (rows.empty()) return Eigen::MatrixXd(0, 1);
  const auto dim = static_cast<Eigen::Index>(rows[0].size());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || static_cast<Eigen::Index>(rows[r].size()) != dim) {
      throw ProtocolError("embedding rows have inconsistent dimensions");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      out(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)].get<double>();
    }
  }
  normalize_rows(out);
  return out;
}

}  // namespace sumrefine::metrics
