// Copyright 2026 The fibbraid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fibbraid/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fibbraid/errors.hpp"

namespace fibbraid {

using nlohmann::json;

namespace {

json tensor_to_json(const double* data, const TensorInfo& t) {
  if (t.cols == 1) {
    json arr = json::array();
    for (int r = 0; r < t.rows; ++r) arr.push_back(data[r]);
    return arr;
  }
  json rows = json::array();
  for (int r = 0; r < t.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < t.cols; ++c) row.push_back(data[r + static_cast<std::size_t>(c) * t.rows]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void tensor_from_json(const json& j, double* data, const TensorInfo& t) {
  auto number = [&](const json& v) {
    if (!v.is_number()) throw CorruptCheckpoint("tensor '" + t.name + "' has a non-numeric entry");
    return v.get<double>();
  };
  if (!j.is_array() || j.size() != static_cast<std::size_t>(t.rows)) {
    throw CorruptCheckpoint("tensor '" + t.name + "' has the wrong row count");
  }
  for (int r = 0; r < t.rows; ++r) {
    if (t.cols == 1) {
      data[r] = number(j[r]);
      continue;
    }
    const json& row = j[r];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(t.cols)) {
      throw CorruptCheckpoint("tensor '" + t.name + "' has the wrong column count");
    }
    for (int c = 0; c < t.cols; ++c) data[r + static_cast<std::size_t>(c) * t.rows] = number(row[c]);
  }
}

}  // namespace

std::string checkpoint_to_string(const MLPNetwork& net) {
  if (!net.initialized()) throw UninitializedNetwork("cannot checkpoint an uninitialized network");
  if (!net.parameters().allFinite()) throw DivergenceDetected("non-finite parameters");
  const NetworkSpec& s = net.spec();
  json doc;
  doc["version"] = kCheckpointVersion;
  doc["spec"] = {{"input_dim", s.input_dim},       {"hidden1", s.hidden1},
                 {"hidden2", s.hidden2},           {"n_res_blocks", s.n_res_blocks},
                 {"res_width", s.res_width},       {"leaky_slope", s.leaky_slope},
                 {"use_batchnorm", s.use_batchnorm}};
  json params = json::object();
  for (const auto& t : net.parameter_tensors()) {
    params[t.name] = tensor_to_json(net.parameters().data() + t.offset, t);
  }
  json stats = json::object();
  for (const auto& t : net.stat_tensors()) {
    stats[t.name] = tensor_to_json(net.running_stats().data() + t.offset, t);
  }
  doc["parameters"] = std::move(params);
  doc["running_stats"] = std::move(stats);
  return doc.dump();
}

MLPNetwork checkpoint_from_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw CorruptCheckpoint(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.contains("version") || doc["version"] != kCheckpointVersion) {
      throw CorruptCheckpoint("unsupported checkpoint version");
    }
    const json& js = doc.at("spec");
    NetworkSpec spec;
    spec.input_dim = js.at("input_dim").get<int>();
    spec.hidden1 = js.at("hidden1").get<int>();
    spec.hidden2 = js.at("hidden2").get<int>();
    spec.n_res_blocks = js.at("n_res_blocks").get<int>();
    spec.res_width = js.at("res_width").get<int>();
    spec.leaky_slope = js.at("leaky_slope").get<double>();
    spec.use_batchnorm = js.at("use_batchnorm").get<bool>();
    MLPNetwork net(spec);

    Vector params = Vector::Zero(static_cast<Eigen::Index>(spec.parameter_count()));
    const json& jp = doc.at("parameters");
    if (jp.size() != net.parameter_tensors().size()) throw CorruptCheckpoint("unexpected parameter tensors");
    for (const auto& t : net.parameter_tensors()) {
      if (!jp.contains(t.name)) throw CorruptCheckpoint("missing tensor '" + t.name + "'");
      tensor_from_json(jp.at(t.name), params.data() + t.offset, t);
    }
    Vector stats = Vector::Zero(net.running_stats().size());
    const json& jst = doc.at("running_stats");
    if (jst.size() != net.stat_tensors().size()) throw CorruptCheckpoint("unexpected running statistics");
    for (const auto& t : net.stat_tensors()) {
      if (!jst.contains(t.name)) throw CorruptCheckpoint("missing tensor '" + t.name + "'");
      tensor_from_json(jst.at(t.name), stats.data() + t.offset, t);
    }
    net.load_state(std::move(params), std::move(stats));
    return net;
  } catch (const SpecMismatch& e) {
    throw CorruptCheckpoint(std::string("invalid spec: ") + e.what());
  } catch (const json::exception& e) {
    throw CorruptCheckpoint(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const MLPNetwork& net, const std::filesystem::path& path) {
  const std::string text = checkpoint_to_string(net);
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
    out << text << '\n';
  }
  std::filesystem::rename(tmp, path);
}

MLPNetwork load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptCheckpoint("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return checkpoint_from_string(ss.str());
}

}  // namespace fibbraid
