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

// Annotation quality scoring against an external judge service, and the
// two-threshold retention rule applied after scoring.

#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "curate/error.hpp"
#include "curate/records.hpp"
#include "curate/types.hpp"

namespace curate {

struct AssessmentRequest {
  std::string id;
  std::string question;
  std::string answer;
  std::vector<std::string> image_refs;

  static AssessmentRequest From(const VqaSample& sample);
};

struct AssessmentResponse {
  double correctness = 0.0;
  double completeness = 0.0;
  double clarity = 0.0;
  double relevance = 0.0;
  std::string rationale;
};

Json RequestToJson(const AssessmentRequest& request);
AssessmentRequest RequestFromJson(const Json& body);
Json ResponseToJson(const AssessmentResponse& response);
// Throws ProtocolError on a missing or non-numeric score.
AssessmentResponse ResponseFromJson(const Json& body);

// Connection refused, timeout, 5xx. Retried.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what)
      : Error(ErrorKind::kService, what) {}
};

// The service answered with something that is not a valid response. Not
// retried.
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what)
      : Error(ErrorKind::kService, "protocol error: " + what) {}
};

class AssessmentUnavailable : public Error {
 public:
  AssessmentUnavailable(const std::string& sample_id, const std::string& cause)
      : Error(ErrorKind::kService,
              "assessment-unavailable for " + sample_id + ": " + cause),
        sample_id_(sample_id) {}

  const std::string& sample_id() const { return sample_id_; }

 private:
  std::string sample_id_;
};

// Implementations must be safe to call from several threads at once.
class AssessmentClient {
 public:
  virtual ~AssessmentClient() = default;
  virtual AssessmentResponse Assess(const AssessmentRequest& request) = 0;
};

// Deterministic offline judge: scores are a pure function of (seed, id).
// Optionally fails the first attempt of every `transient_every`-th distinct
// request, or every attempt when `always_fail` is set.
class StubAssessmentClient : public AssessmentClient {
 public:
  struct Options {
    std::uint64_t seed = 0;
    std::size_t transient_every = 0;  // 0 disables transient failures
    bool always_fail = false;
  };

  explicit StubAssessmentClient(Options options) : options_(options) {}

  AssessmentResponse Assess(const AssessmentRequest& request) override;

  // The scores the stub returns for `id`, without failure injection.
  static AssessmentResponse ScoresFor(std::uint64_t seed, const std::string& id);

  std::size_t calls() const { return calls_.load(); }

 private:
  Options options_;
  std::atomic<std::size_t> calls_{0};
  std::mutex mu_;
  std::unordered_map<std::string, std::size_t> attempts_;
  std::size_t distinct_ = 0;
};

// POSTs the request object as JSON to `endpoint` (http://host[:port]/path).
class HttpAssessmentClient : public AssessmentClient {
 public:
  explicit HttpAssessmentClient(std::string endpoint,
                                std::chrono::milliseconds timeout =
                                    std::chrono::milliseconds(30000));

  AssessmentResponse Assess(const AssessmentRequest& request) override;

 private:
  std::string host_;  // scheme://host:port
  std::string path_;
  std::chrono::milliseconds timeout_;
};

// Clamps each dimension into [0,1] (setting `clamped` if any moved) and
// averages the four dimensions. Non-finite scores are a ProtocolError.
QualityAssessment MakeAssessment(const AssessmentResponse& response);

using Sleeper = std::function<void(std::chrono::milliseconds)>;

void RealSleep(std::chrono::milliseconds delay);

// Delay before retry number `retry` (1-based): base * 2^(retry-1), capped at
// max_delay_ms, scaled by a jitter factor drawn from [1-jitter, 1+jitter]
// using `unit` in [0,1).
std::chrono::milliseconds BackoffDelay(const RetryPolicy& policy, int retry,
                                       double unit);

// One sample, retried on TransportError up to policy.max_attempts attempts.
// Throws AssessmentUnavailable once attempts run out, ProtocolError on a bad
// response.
QualityAssessment Assess(const VqaSample& sample, AssessmentClient& client,
                         const RetryPolicy& policy = RetryPolicy{},
                         const Sleeper& sleep = RealSleep,
                         std::uint64_t jitter_seed = 0);

enum class DropReason { kLowEntropy, kLowQuality };

std::string_view ToString(DropReason reason);

struct RetainDecision {
  bool keep = false;
  std::optional<DropReason> reason;
};

// keep iff h_total > tau and mean_score > phi; entropy is tested first.
RetainDecision Retain(double h_total, double mean_score,
                      const FilterConfig& config);
RetainDecision Retain(const EntropyReport& entropy,
                      const QualityAssessment& quality,
                      const FilterConfig& config);

struct AssessFailure {
  std::string message;
  bool unavailable = false;  // false: protocol error
};

struct AssessOutcome {
  VqaSample sample;
  std::variant<QualityAssessment, AssessFailure> result;

  bool ok() const { return std::holds_alternative<QualityAssessment>(result); }
};

using SampleSource = std::function<std::optional<VqaSample>()>;
using OutcomeSink = std::function<void(AssessOutcome)>;

struct BatchOptions {
  std::size_t parallelism = 1;
  RetryPolicy retry;
  Sleeper sleep = RealSleep;
  std::uint64_t seed = 0;
};

// Runs at most `parallelism` assessments at a time. Every input produces
// exactly one outcome; per-sample failures are reported in-stream. The sink
// is called from worker threads but never concurrently. Outcomes may arrive
// in any order. Returns the number of samples processed.
std::size_t BatchAssess(const SampleSource& source, AssessmentClient& client,
                        const BatchOptions& options, const OutcomeSink& sink);

}  // namespace curate
