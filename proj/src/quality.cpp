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

#include "curate/quality.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <thread>

#include "curate/rng.hpp"
#include "httplib.h"

namespace curate {
namespace {

constexpr std::array<const char*, 4> kDimensions = {
    "correctness", "completeness", "clarity", "relevance"};

double Clamp01(double v, bool* moved) {
  const double c = std::clamp(v, 0.0, 1.0);
  if (c != v) *moved = true;
  return c;
}

}  // namespace

AssessmentRequest AssessmentRequest::From(const VqaSample& sample) {
  return {sample.id, sample.question, sample.answer, sample.image_refs};
}

Json RequestToJson(const AssessmentRequest& r) {
  return {{"id", r.id},
          {"question", r.question},
          {"answer", r.answer},
          {"image_refs", r.image_refs}};
}

AssessmentRequest RequestFromJson(const Json& body) {
  AssessmentRequest r;
  r.id = RequireString(body, "id");
  r.question = RequireString(body, "question");
  r.answer = RequireString(body, "answer");
  if (auto it = body.find("image_refs"); it != body.end() && it->is_array()) {
    for (const auto& v : *it) {
      if (v.is_string()) r.image_refs.push_back(v.get<std::string>());
    }
  }
  return r;
}

Json ResponseToJson(const AssessmentResponse& r) {
  Json j = {{"correctness", r.correctness},
            {"completeness", r.completeness},
            {"clarity", r.clarity},
            {"relevance", r.relevance}};
  if (!r.rationale.empty()) j["rationale"] = r.rationale;
  return j;
}

AssessmentResponse ResponseFromJson(const Json& body) {
  if (!body.is_object()) throw ProtocolError("response is not a JSON object");
  double scores[4];
  for (std::size_t i = 0; i < 4; ++i) {
    auto it = body.find(kDimensions[i]);
    if (it == body.end() || !it->is_number()) {
      throw ProtocolError(std::string("missing numeric \"") + kDimensions[i] +
                          "\"");
    }
    scores[i] = it->get<double>();
  }
  AssessmentResponse r{scores[0], scores[1], scores[2], scores[3], {}};
  if (auto it = body.find("rationale"); it != body.end() && it->is_string()) {
    r.rationale = it->get<std::string>();
  }
  return r;
}

AssessmentResponse StubAssessmentClient::ScoresFor(std::uint64_t seed,
                                                   const std::string& id) {
  double scores[4];
  for (std::size_t i = 0; i < 4; ++i) {
    const std::uint64_t h = HashString(id, seed * 4 + i);
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    scores[i] = std::round((0.55 + 0.45 * std::sqrt(u)) * 1000.0) / 1000.0;
  }
  return {scores[0], scores[1], scores[2], scores[3], "stub"};
}

AssessmentResponse StubAssessmentClient::Assess(
    const AssessmentRequest& request) {
  ++calls_;
  if (options_.always_fail) throw TransportError("stub: injected failure");
  if (options_.transient_every > 0) {
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = attempts_.try_emplace(request.id, 0);
    if (inserted) it->second = ++distinct_;
    const bool first_attempt = inserted;
    if (first_attempt && it->second % options_.transient_every == 0) {
      throw TransportError("stub: injected transient failure");
    }
  }
  return ScoresFor(options_.seed, request.id);
}

HttpAssessmentClient::HttpAssessmentClient(std::string endpoint,
                                           std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  const auto scheme = endpoint.find("://");
  const auto path_start =
      endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_start == std::string::npos) {
    host_ = endpoint;
    path_ = "/";
  } else {
    host_ = endpoint.substr(0, path_start);
    path_ = endpoint.substr(path_start);
  }
  if (host_.empty()) throw InvalidArgument("empty quality endpoint");
}

AssessmentResponse HttpAssessmentClient::Assess(
    const AssessmentRequest& request) {
  httplib::Client client(host_);
  if (!client.is_valid()) {
    throw InvalidArgument("invalid quality endpoint " + host_);
  }
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  auto res = client.Post(path_, RequestToJson(request).dump(),
                         "application/json");
  if (!res) {
    throw TransportError("request to " + host_ + path_ +
                         " failed: " + httplib::to_string(res.error()));
  }
  if (res->status >= 500 || res->status == 429) {
    throw TransportError("service returned HTTP " + std::to_string(res->status));
  }
  if (res->status < 200 || res->status >= 300) {
    throw ProtocolError("service returned HTTP " + std::to_string(res->status));
  }
  Json body = Json::parse(res->body, nullptr, /*allow_exceptions=*/false);
  if (body.is_discarded()) throw ProtocolError("response body is not JSON");
  return ResponseFromJson(body);
}

QualityAssessment MakeAssessment(const AssessmentResponse& response) {
  const double raw[4] = {response.correctness, response.completeness,
                         response.clarity, response.relevance};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!std::isfinite(raw[i])) {
      throw ProtocolError(std::string("non-finite \"") + kDimensions[i] + "\"");
    }
  }
  QualityAssessment q;
  q.correctness = Clamp01(raw[0], &q.clamped);
  q.completeness = Clamp01(raw[1], &q.clamped);
  q.clarity = Clamp01(raw[2], &q.clamped);
  q.relevance = Clamp01(raw[3], &q.clamped);
  q.mean_score = (q.correctness + q.completeness + q.clarity + q.relevance) / 4.0;
  q.rationale = response.rationale;
  return q;
}

void RealSleep(std::chrono::milliseconds delay) {
  std::this_thread::sleep_for(delay);
}

std::chrono::milliseconds BackoffDelay(const RetryPolicy& policy, int retry,
                                       double unit) {
  double delay = policy.base_delay_ms * std::pow(2.0, std::max(0, retry - 1));
  delay = std::min(delay, policy.max_delay_ms);
  delay *= 1.0 + policy.jitter * (2.0 * unit - 1.0);
  return std::chrono::milliseconds(
      static_cast<long long>(std::llround(std::max(0.0, delay))));
}

QualityAssessment Assess(const VqaSample& sample, AssessmentClient& client,
                         const RetryPolicy& policy, const Sleeper& sleep,
                         std::uint64_t jitter_seed) {
  const AssessmentRequest request = AssessmentRequest::From(sample);
  Rng jitter(HashString(sample.id, jitter_seed));
  std::string last_error;
  for (int attempt = 1; attempt <= std::max(1, policy.max_attempts); ++attempt) {
    if (attempt > 1) sleep(BackoffDelay(policy, attempt - 1, jitter.Uniform()));
    try {
      return MakeAssessment(client.Assess(request));
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  throw AssessmentUnavailable(sample.id, last_error);
}

std::string_view ToString(DropReason reason) {
  return reason == DropReason::kLowEntropy ? "low-entropy" : "low-quality";
}

RetainDecision Retain(double h_total, double mean_score,
                      const FilterConfig& config) {
  if (!(h_total > config.tau)) return {false, DropReason::kLowEntropy};
  if (!(mean_score > config.phi)) return {false, DropReason::kLowQuality};
  return {true, std::nullopt};
}

RetainDecision Retain(const EntropyReport& entropy,
                      const QualityAssessment& quality,
                      const FilterConfig& config) {
  return Retain(entropy.h_total, quality.mean_score, config);
}

std::size_t BatchAssess(const SampleSource& source, AssessmentClient& client,
                        const BatchOptions& options, const OutcomeSink& sink) {
  if (options.parallelism < 1) throw InvalidArgument("parallelism must be >= 1");

  std::mutex source_mu;
  std::mutex sink_mu;
  std::size_t processed = 0;
  std::exception_ptr fatal;

  auto worker = [&] {
    for (;;) {
      std::optional<VqaSample> sample;
      {
        std::lock_guard<std::mutex> lock(source_mu);
        if (fatal) return;
        try {
          sample = source();
        } catch (...) {
          fatal = std::current_exception();
          return;
        }
        if (!sample) return;
      }
      AssessOutcome outcome{std::move(*sample), AssessFailure{}};
      try {
        outcome.result = Assess(outcome.sample, client, options.retry,
                                options.sleep, options.seed);
      } catch (const AssessmentUnavailable& e) {
        outcome.result = AssessFailure{e.what(), true};
      } catch (const Error& e) {
        outcome.result = AssessFailure{e.what(), false};
      } catch (const std::exception& e) {
        outcome.result = AssessFailure{e.what(), false};
      }
      std::lock_guard<std::mutex> lock(sink_mu);
      ++processed;
      try {
        sink(std::move(outcome));
      } catch (...) {
        std::lock_guard<std::mutex> source_lock(source_mu);
        if (!fatal) fatal = std::current_exception();
        return;
      }
    }
  };

  if (options.parallelism == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(options.parallelism);
    for (std::size_t i = 0; i < options.parallelism; ++i) {
      threads.emplace_back(worker);
    }
    for (auto& t : threads) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);
  return processed;
}

}  // namespace curate
