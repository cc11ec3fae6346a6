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

#include "curate/ingest.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <iostream>
#include <system_error>

#include "curate/error.hpp"

namespace curate {
namespace {

std::uint32_t ToLittleEndian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) |
           (v >> 24);
  }
}

bool IsBlank(const std::string& line) {
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

}  // namespace

JsonlReader::JsonlReader(const std::filesystem::path& path) {
  if (path == "-") {
    in_ = &std::cin;
    return;
  }
  file_ = std::make_unique<std::ifstream>(path);
  if (!*file_) throw DataError("cannot open " + path.string());
  in_ = file_.get();
}

std::optional<Json> JsonlReader::Next() {
  std::string text;
  while (std::getline(*in_, text)) {
    ++line_;
    if (IsBlank(text)) continue;
    Json parsed = Json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) {
      AddError("malformed JSON");
      continue;
    }
    if (!parsed.is_object()) {
      AddError("record is not a JSON object");
      continue;
    }
    return parsed;
  }
  return std::nullopt;
}

std::optional<VqaSample> SampleReader::Next() {
  while (auto record = reader_.Next()) {
    try {
      return SampleFromJson(*record);
    } catch (const Error& e) {
      reader_.AddError(e.what());
    } catch (const Json::exception& e) {
      reader_.AddError(e.what());
    }
  }
  return std::nullopt;
}

SampleReadResult ReadSamples(const std::filesystem::path& path) {
  SampleReader reader(path);
  SampleReadResult result;
  while (auto s = reader.Next()) result.samples.push_back(std::move(*s));
  result.errors = reader.errors();
  return result;
}

DepthMap LoadDepthMap(const std::filesystem::path& path, std::size_t width,
                      std::size_t height) {
  std::error_code ec;
  const auto actual = std::filesystem::file_size(path, ec);
  if (ec) throw DataError("cannot stat depth file " + path.string());
  const std::uintmax_t expected = std::uintmax_t{width} * height * 4;
  if (actual != expected) {
    throw DataError("depth file " + path.string() + " size mismatch: expected " +
                    std::to_string(expected) + " bytes, got " +
                    std::to_string(actual));
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open depth file " + path.string());

  DepthMap depth;
  depth.width = width;
  depth.height = height;
  depth.values.resize(width * height);
  std::vector<std::uint32_t> raw(width * height);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(expected));
  if (!in) throw DataError("short read on depth file " + path.string());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    depth.values[i] = std::bit_cast<float>(ToLittleEndian(raw[i]));
  }
  return depth;
}

void WriteDepthMap(const std::filesystem::path& path, const DepthMap& depth) {
  if (depth.values.size() != depth.width * depth.height) {
    throw InvalidArgument("depth map length does not match its dimensions");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write depth file " + path.string());
  for (float v : depth.values) {
    const std::uint32_t le = ToLittleEndian(std::bit_cast<std::uint32_t>(v));
    out.write(reinterpret_cast<const char*>(&le), sizeof(le));
  }
  if (!out) throw DataError("write failed on " + path.string());
}

std::size_t WriteSamples(std::span<const VqaSample> samples,
                         const std::filesystem::path& path) {
  LineWriter writer(path);
  for (const auto& s : samples) writer.Write(SampleToJson(s));
  writer.Close();
  return samples.size();
}

CorpusManifest BuildCorpusManifest(const std::string& root,
                                   std::span<const VqaSample> samples) {
  CorpusManifest m;
  m.root = root;
  m.sample_count = samples.size();
  for (const auto& s : samples) ++m.per_dataset[s.dataset_name];
  return m;
}

std::optional<std::string> CurationRejectReason(const VqaSample& sample) {
  if (sample.image_refs.empty()) {
    return "text-only record (no images) rejected for curation";
  }
  return std::nullopt;
}

std::filesystem::path ResolveRelative(const std::filesystem::path& corpus,
                                      const std::string& ref) {
  std::filesystem::path p(ref);
  if (p.is_absolute() || corpus == "-") return p;
  return corpus.parent_path() / p;
}

LineWriter::LineWriter(const std::filesystem::path& path) : path_(path) {
  if (path == "-") {
    out_ = &std::cout;
    return;
  }
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  file_ = std::make_unique<std::ofstream>(path, std::ios::trunc);
  if (!*file_) throw DataError("cannot open " + path.string() + " for writing");
  out_ = file_.get();
}

LineWriter::~LineWriter() {
  if (!closed_ && out_) out_->flush();
}

void LineWriter::Write(const Json& record) {
  *out_ << record.dump() << '\n';
}

void LineWriter::WriteRaw(const std::string& text) { *out_ << text; }

void LineWriter::Close() {
  closed_ = true;
  out_->flush();
  if (!*out_) throw DataError("write failed on " + path_.string());
  if (file_) {
    file_->close();
    if (!*file_) throw DataError("close failed on " + path_.string());
  }
}

}  // namespace curate
