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

#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curate/records.hpp"
#include "curate/types.hpp"

namespace curate {

inline constexpr const char* kSchemaVersion = "curate-jsonl/1";

// A malformed line. Parsing continues past it.
struct RecordError {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

// Single-pass reader over a line-delimited JSON file. Blank lines are skipped.
// Reads from stdin when the path is "-".
class JsonlReader {
 public:
  explicit JsonlReader(const std::filesystem::path& path);

  // Next parsed object, or nullopt at end of input. Lines that are not a JSON
  // object are recorded in errors() and skipped.
  std::optional<Json> Next();

  // Line number of the record most recently returned by Next().
  std::size_t line() const { return line_; }
  const std::vector<RecordError>& errors() const { return errors_; }
  void AddError(std::string reason) { errors_.push_back({line_, std::move(reason)}); }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* in_ = nullptr;
  std::size_t line_ = 0;
  std::vector<RecordError> errors_;
};

// Streams VqaSample records. A record missing a required field (id,
// question, answer, task_kind) or holding a malformed value becomes a
// RecordError carrying its line number.
class SampleReader {
 public:
  explicit SampleReader(const std::filesystem::path& path) : reader_(path) {}

  std::optional<VqaSample> Next();

  std::size_t line() const { return reader_.line(); }
  const std::vector<RecordError>& errors() const { return reader_.errors(); }

 private:
  JsonlReader reader_;
};

struct SampleReadResult {
  std::vector<VqaSample> samples;
  std::vector<RecordError> errors;
};

// Convenience wrapper that drains a SampleReader.
SampleReadResult ReadSamples(const std::filesystem::path& path);

// Loads a headerless little-endian float32 row-major depth payload. The file
// size must be exactly width * height * 4 bytes. Non-finite values are kept.
DepthMap LoadDepthMap(const std::filesystem::path& path, std::size_t width,
                      std::size_t height);
void WriteDepthMap(const std::filesystem::path& path, const DepthMap& depth);

// Writes one record per line. "-" writes to stdout.
std::size_t WriteSamples(std::span<const VqaSample> samples,
                         const std::filesystem::path& path);

struct CorpusManifest {
  std::string root;
  std::size_t sample_count = 0;
  std::map<std::string, std::size_t> per_dataset;
  std::string schema_version = kSchemaVersion;
};

CorpusManifest BuildCorpusManifest(const std::string& root,
                                   std::span<const VqaSample> samples);

// Curation runs need image-grounded records; text-only records are rejected.
std::optional<std::string> CurationRejectReason(const VqaSample& sample);

// Resolves a depth path relative to the directory of the corpus file.
std::filesystem::path ResolveRelative(const std::filesystem::path& corpus,
                                      const std::string& ref);

// Output sink that is either a file or stdout ("-").
class LineWriter {
 public:
  explicit LineWriter(const std::filesystem::path& path);
  ~LineWriter();
  LineWriter(const LineWriter&) = delete;
  LineWriter& operator=(const LineWriter&) = delete;

  void Write(const Json& record);
  void WriteRaw(const std::string& text);
  // Flushes and throws DataError if any write failed.
  void Close();

 private:
  std::filesystem::path path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_ = nullptr;
  bool closed_ = false;
};

}  // namespace curate
