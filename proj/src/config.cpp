// Copyright 2026 The Curate Authors.
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

#include "curate/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "curate/error.hpp"

namespace curate {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> SplitList(std::string_view text) {
  std::vector<std::string> out;
  text = Trim(text);
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const auto item = Trim(text.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double ParseDouble(std::string_view key, std::string_view text) {
  text = Trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw InvalidArgument("config " + std::string(key) + ": \"" +
                          std::string(text) + "\" is not a number");
  }
  return v;
}

int ParseInt(std::string_view key, std::string_view text) {
  text = Trim(text);
  int v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw InvalidArgument("config " + std::string(key) + ": \"" +
                          std::string(text) + "\" is not an integer");
  }
  return v;
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string JoinSet(const std::set<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ",";
    out += s;
  }
  return out;
}

std::set<std::string> ParseSet(std::string_view text, bool lowercase) {
  std::set<std::string> out;
  for (auto& item : SplitList(text)) {
    if (item.empty()) continue;
    if (lowercase) {
      for (char& c : item) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    out.insert(std::move(item));
  }
  return out;
}

TierMixture ParseMixture(std::string_view key, std::string_view text) {
  TierMixture out;
  for (const auto& item : SplitList(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw InvalidArgument("config " + std::string(key) + ": expected TIER:FRACTION, got \"" +
                            item + "\"");
    }
    auto tier = ParseTier(std::string(Trim(std::string_view(item).substr(0, colon))));
    if (!tier) {
      throw InvalidArgument("config " + std::string(key) + ": unknown tier in \"" + item + "\"");
    }
    out[*tier] = ParseDouble(key, std::string_view(item).substr(colon + 1));
  }
  return out;
}

std::string FormatMixture(const TierMixture& mixture) {
  std::string out;
  for (const auto& [tier, f] : mixture) {
    if (!out.empty()) out += ",";
    out += std::string(ToString(tier)) + ":" + FormatDouble(f);
  }
  return out;
}

struct Field {
  std::function<void(PipelineConfig&, std::string_view key, std::string_view)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

template <typename Member>
Field DoubleField(Member member) {
  return {[member](PipelineConfig& c, std::string_view k, std::string_view v) {
            member(c) = ParseDouble(k, v);
          },
          [member](const PipelineConfig& c) {
            return FormatDouble(member(const_cast<PipelineConfig&>(c)));
          }};
}

template <typename Member>
Field IntField(Member member) {
  return {[member](PipelineConfig& c, std::string_view k, std::string_view v) {
            member(c) = ParseInt(k, v);
          },
          [member](const PipelineConfig& c) {
            return std::to_string(member(const_cast<PipelineConfig&>(c)));
          }};
}

template <typename Member>
Field SetField(Member member, bool lowercase) {
  return {[member, lowercase](PipelineConfig& c, std::string_view, std::string_view v) {
            member(c) = ParseSet(v, lowercase);
          },
          [member](const PipelineConfig& c) {
            return JoinSet(member(const_cast<PipelineConfig&>(c)));
          }};
}

template <typename Member>
Field MixtureField(Member member) {
  return {[member](PipelineConfig& c, std::string_view k, std::string_view v) {
            member(c) = ParseMixture(k, v);
          },
          [member](const PipelineConfig& c) {
            return FormatMixture(member(const_cast<PipelineConfig&>(c)));
          }};
}

#define CURATE_MEMBER(expr) [](PipelineConfig& c) -> auto& { return c.expr; }

const std::vector<std::pair<std::string, Field>>& Registry() {
  static const std::vector<std::pair<std::string, Field>> registry = {
      {"alpha", DoubleField(CURATE_MEMBER(entropy.alpha))},
      {"block_size", IntField(CURATE_MEMBER(entropy.block_size))},
      {"sigma_min_sq", DoubleField(CURATE_MEMBER(entropy.sigma_min_sq))},
      {"sigma_max_sq", DoubleField(CURATE_MEMBER(entropy.sigma_max_sq))},
      {"grid_dims",
       {[](PipelineConfig& c, std::string_view k, std::string_view v) {
          const auto items = SplitList(v);
          if (items.size() != 3) {
            throw InvalidArgument("config grid_dims: expected nx,ny,nz");
          }
          for (int i = 0; i < 3; ++i) c.entropy.grid_dims[i] = ParseInt(k, items[i]);
        },
        [](const PipelineConfig& c) {
          const auto& d = c.entropy.grid_dims;
          return std::to_string(d[0]) + "," + std::to_string(d[1]) + "," +
                 std::to_string(d[2]);
        }}},
      {"grid_bounds",
       {[](PipelineConfig& c, std::string_view k, std::string_view v) {
          const auto items = SplitList(v);
          if (items.size() != 6) {
            throw InvalidArgument(
                "config grid_bounds: expected x_lo,x_hi,y_lo,y_hi,z_lo,z_hi");
          }
          for (int i = 0; i < 3; ++i) {
            c.entropy.grid_bounds[i] = {ParseDouble(k, items[2 * i]),
                                        ParseDouble(k, items[2 * i + 1])};
          }
        },
        [](const PipelineConfig& c) {
          std::string out;
          for (const auto& [lo, hi] : c.entropy.grid_bounds) {
            if (!out.empty()) out += ",";
            out += FormatDouble(lo) + "," + FormatDouble(hi);
          }
          return out;
        }}},
      {"theta1", DoubleField(CURATE_MEMBER(taxonomy.theta1))},
      {"theta2", DoubleField(CURATE_MEMBER(taxonomy.theta2))},
      {"theta3", DoubleField(CURATE_MEMBER(taxonomy.theta3))},
      {"promote_t3_tags", SetField(CURATE_MEMBER(taxonomy.promote_t3_tags), true)},
      {"promote_t4_tags", SetField(CURATE_MEMBER(taxonomy.promote_t4_tags), true)},
      {"tau", DoubleField(CURATE_MEMBER(filter.tau))},
      {"phi", DoubleField(CURATE_MEMBER(filter.phi))},
      {"lambda_format", DoubleField(CURATE_MEMBER(reward.lambda_format))},
      {"lambda_correct", DoubleField(CURATE_MEMBER(reward.lambda_correct))},
      {"point_radius_px", DoubleField(CURATE_MEMBER(reward.point_radius_px))},
      {"kl_coeff", DoubleField(CURATE_MEMBER(reward.kl_coeff))},
      {"clip_eps", DoubleField(CURATE_MEMBER(reward.clip_eps))},
      {"group_size", IntField(CURATE_MEMBER(reward.group_size))},
      {"advantage_eps", DoubleField(CURATE_MEMBER(reward.advantage_eps))},
      {"s1_mixture", MixtureField(CURATE_MEMBER(curriculum.s1))},
      {"s2_mixture", MixtureField(CURATE_MEMBER(curriculum.s2))},
      {"s3_start_mixture", MixtureField(CURATE_MEMBER(curriculum.s3_start))},
      {"s3_end_mixture", MixtureField(CURATE_MEMBER(curriculum.s3_end))},
      {"embodied_datasets", SetField(CURATE_MEMBER(curriculum.embodied_datasets), false)},
      {"retry_attempts", IntField(CURATE_MEMBER(retry.max_attempts))},
      {"retry_base_ms", DoubleField(CURATE_MEMBER(retry.base_delay_ms))},
      {"retry_max_ms", DoubleField(CURATE_MEMBER(retry.max_delay_ms))},
      {"retry_jitter", DoubleField(CURATE_MEMBER(retry.jitter))},
      {"normalize_eps", DoubleField(CURATE_MEMBER(normalize_eps))},
  };
  return registry;
}

#undef CURATE_MEMBER

const Field& Lookup(std::string_view key) {
  for (const auto& [name, field] : Registry()) {
    if (name == key) return field;
  }
  throw InvalidArgument("unknown config key \"" + std::string(key) + "\"");
}

}  // namespace

const std::vector<std::string>& PipelineConfig::Keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [name, field] : Registry()) out.push_back(name);
    return out;
  }();
  return keys;
}

void PipelineConfig::Set(std::string_view key, std::string_view value) {
  Lookup(key).set(*this, key, value);
}

std::string PipelineConfig::Get(std::string_view key) const {
  return Lookup(key).get(*this);
}

std::vector<ConfigViolation> PipelineConfig::Validate() const {
  auto out = ValidateConfigs(entropy, taxonomy, filter, reward);
  for (auto& v : ValidateCurriculum(curriculum)) out.push_back(std::move(v));
  for (auto& v : ValidateRetry(retry)) out.push_back(std::move(v));
  if (!(normalize_eps > 0.0)) out.push_back({"normalize_eps", "normalize_eps > 0"});
  return out;
}

std::string PipelineConfig::Dump() const {
  std::string out;
  for (const auto& [name, field] : Registry()) {
    out += name + " = " + field.get(*this) + "\n";
  }
  return out;
}

void PipelineConfig::LoadText(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) +
                            ": expected key = value");
    }
    try {
      Set(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void PipelineConfig::LoadFile(const std::filesystem::path& path) {
  if (path == "defaults") {
    *this = PipelineConfig{};
    return;
  }
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  LoadText(buf.str());
}

}  // namespace curate
