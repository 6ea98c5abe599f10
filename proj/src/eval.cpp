// Copyright 2026 The screenparse Authors
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

#include "screenparse/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "screenparse/annotate.hpp"
#include "screenparse/candidates.hpp"
#include "screenparse/errors.hpp"
#include "screenparse/grounding.hpp"

namespace screenparse {

using nlohmann::json;

std::vector<EvalSample> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kDataset, "cannot open manifest: " + path.string());
  const std::filesystem::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path rel(p);
    return rel.is_absolute() ? rel : base / rel;
  };
  std::vector<EvalSample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      EvalSample s;
      s.candidates_path = resolve(j.at("candidates").get<std::string>());
      s.image_path = resolve(j.at("image").get<std::string>());
      s.instruction = j.at("instruction").get<std::string>();
      s.gt_box = box_from_json(j.at("gt_box"), "gt_box");
      if (j.contains("platform")) s.platform = j.at("platform").get<std::string>();
      if (j.contains("element_type")) s.element_type = j.at("element_type").get<std::string>();
      samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kDataset, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorKind::kDataset, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (samples.empty()) throw Error(ErrorKind::kDataset, "manifest has no samples: " + path.string());
  return samples;
}

int lee_score(const ScreenHierarchy& h, const BBox& gt_box) {
  return std::any_of(h.elements.begin(), h.elements.end(),
                     [&](const LocalElement& e) { return midpoint_in(gt_box, e.box); })
             ? 1
             : 0;
}

Aggregates aggregate(const std::vector<const SampleRecord*>& records, int k) {
  Aggregates a;
  a.count = records.size();
  a.pass_at.assign(static_cast<std::size_t>(k), 0.0);
  if (records.empty()) return a;
  std::vector<std::size_t> pass(static_cast<std::size_t>(k), 0);
  std::size_t groi_hits = 0, lee = 0;
  for (const SampleRecord* r : records) {
    for (std::size_t j = 0; j < pass.size() && j < r->pass.size(); ++j) pass[j] += r->pass[j] ? 1 : 0;
    groi_hits += r->groi_hit ? 1 : 0;
    lee += static_cast<std::size_t>(r->lee);
  }
  const double n = static_cast<double>(records.size());
  for (std::size_t j = 0; j < pass.size(); ++j) a.pass_at[j] = static_cast<double>(pass[j]) / n;
  a.accuracy = a.pass_at.front();
  a.groi_proposal_accuracy = static_cast<double>(groi_hits) / n;
  a.lee_mean = static_cast<double>(lee) / n;
  return a;
}

namespace {

SampleRecord evaluate_sample(const EvalSample& s, std::size_t index, AgentContext& ctx,
                             const EvalOptions& options) {
  SampleRecord r;
  r.index = index;
  r.instruction = s.instruction;
  r.platform = s.platform;
  r.element_type = s.element_type;
  r.pass.assign(static_cast<std::size_t>(options.k), false);
  try {
    GroundingTask task{s.instruction, parse_screen(load_candidates(s.candidates_path), options.hsp),
                       load_image(s.image_path)};
    r.lee = lee_score(task.hierarchy, s.gt_box);
    GroiProposal proposal = propose_groi(task, ctx);
    r.groi_id = proposal.groi_id;
    r.groi_hit = groi_proposal_hit(proposal, task.hierarchy, s.gt_box);
    const GroundingResult result = ground_with_proposal(task, std::move(proposal), ctx, options.k);
    for (const GroundingCandidate& c : result.ranked_candidates) r.candidate_ids.push_back(c.element_id);
    for (int j = 1; j <= options.k; ++j) r.pass[static_cast<std::size_t>(j - 1)] = grounding_hit(result, s.gt_box, j);
  } catch (const Error& e) {
    r.error = e.what();
  }
  return r;
}

void fill_aggregates(EvalReport& report) {
  std::vector<const SampleRecord*> all;
  std::map<std::string, std::vector<const SampleRecord*>> platforms, types;
  for (const SampleRecord& r : report.samples) {
    all.push_back(&r);
    if (r.platform) platforms[*r.platform].push_back(&r);
    if (r.element_type) types[*r.element_type].push_back(&r);
  }
  report.overall = aggregate(all, report.k);
  report.by_platform.clear();
  report.by_element_type.clear();
  for (const auto& [tag, records] : platforms) report.by_platform[tag] = aggregate(records, report.k);
  for (const auto& [tag, records] : types) report.by_element_type[tag] = aggregate(records, report.k);
}

}  // namespace

EvalReport run_eval(const std::vector<EvalSample>& dataset, AgentContext& ctx, const EvalOptions& options) {
  if (dataset.empty()) throw Error(ErrorKind::kDataset, "dataset is empty");
  if (options.k < 1) throw Error(ErrorKind::kConfig, "k must be >= 1");
  for (const EvalSample& s : dataset) {
    for (const auto& p : {s.candidates_path, s.image_path}) {
      if (!std::filesystem::exists(p)) throw Error(ErrorKind::kDataset, "missing file: " + p.string());
    }
  }

  EvalReport report;
  report.k = options.k;
  report.samples.resize(dataset.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < dataset.size(); i = next.fetch_add(1)) {
      report.samples[i] = evaluate_sample(dataset[i], i, ctx, options);
    }
  };
  const int n_workers = std::clamp(options.workers, 1, static_cast<int>(dataset.size()));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
  }
  fill_aggregates(report);
  return report;
}

namespace {

json aggregates_to_json(const Aggregates& a) {
  json pass = json::object();
  for (std::size_t j = 0; j < a.pass_at.size(); ++j) pass[std::to_string(j + 1)] = a.pass_at[j];
  return {{"count", a.count},
          {"accuracy", a.accuracy},
          {"pass", pass},
          {"groi_proposal_accuracy", a.groi_proposal_accuracy},
          {"lee_mean", a.lee_mean}};
}

Aggregates aggregates_from_json(const json& j) {
  Aggregates a;
  a.count = j.at("count").get<std::size_t>();
  a.accuracy = j.at("accuracy").get<double>();
  for (std::size_t k = 1; j.at("pass").contains(std::to_string(k)); ++k) {
    a.pass_at.push_back(j.at("pass").at(std::to_string(k)).get<double>());
  }
  a.groi_proposal_accuracy = j.at("groi_proposal_accuracy").get<double>();
  a.lee_mean = j.at("lee_mean").get<double>();
  return a;
}

json optional_string(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> string_or_null(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

}  // namespace

json report_to_json(const EvalReport& report) {
  json samples = json::array();
  for (const SampleRecord& r : report.samples) {
    json pass = json::object();
    for (std::size_t j = 0; j < r.pass.size(); ++j) pass[std::to_string(j + 1)] = static_cast<bool>(r.pass[j]);
    json groi = nullptr;
    if (r.groi_id) groi = *r.groi_id == kFullImage ? json("full") : json(*r.groi_id);
    samples.push_back({{"index", r.index},
                       {"instruction", r.instruction},
                       {"platform", optional_string(r.platform)},
                       {"element_type", optional_string(r.element_type)},
                       {"groi_id", groi},
                       {"groi_hit", r.groi_hit},
                       {"pass", pass},
                       {"lee", r.lee},
                       {"candidates", r.candidate_ids},
                       {"error", optional_string(r.error)}});
  }
  json platforms = json::object(), types = json::object();
  for (const auto& [tag, a] : report.by_platform) platforms[tag] = aggregates_to_json(a);
  for (const auto& [tag, a] : report.by_element_type) types[tag] = aggregates_to_json(a);
  return {{"k", report.k},
          {"overall", aggregates_to_json(report.overall)},
          {"by_platform", platforms},
          {"by_element_type", types},
          {"samples", samples}};
}

EvalReport report_from_json(const json& j) {
  EvalReport report;
  try {
    report.k = j.at("k").get<int>();
    report.overall = aggregates_from_json(j.at("overall"));
    for (const auto& [tag, a] : j.at("by_platform").items()) report.by_platform[tag] = aggregates_from_json(a);
    for (const auto& [tag, a] : j.at("by_element_type").items()) {
      report.by_element_type[tag] = aggregates_from_json(a);
    }
    for (const json& s : j.at("samples")) {
      SampleRecord r;
      r.index = s.at("index").get<std::size_t>();
      r.instruction = s.at("instruction").get<std::string>();
      r.platform = string_or_null(s, "platform");
      r.element_type = string_or_null(s, "element_type");
      const json& groi = s.at("groi_id");
      if (groi.is_string()) {
        r.groi_id = kFullImage;
      } else if (!groi.is_null()) {
        r.groi_id = groi.get<int>();
      }
      r.groi_hit = s.at("groi_hit").get<bool>();
      for (int k = 1; k <= report.k; ++k) r.pass.push_back(s.at("pass").at(std::to_string(k)).get<bool>());
      r.lee = s.at("lee").get<int>();
      r.candidate_ids = s.at("candidates").get<std::vector<int>>();
      r.error = string_or_null(s, "error");
      report.samples.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kMalformedInput, std::string("report: ") + e.what());
  }
  return report;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "index,instruction,platform,element_type,groi_id,groi_hit";
  for (int j = 1; j <= report.k; ++j) out << ",pass@" << j;
  out << ",lee,candidates,error\n";
  for (const SampleRecord& r : report.samples) {
    std::string groi;
    if (r.groi_id) groi = *r.groi_id == kFullImage ? "full" : std::to_string(*r.groi_id);
    std::string ids;
    for (int id : r.candidate_ids) ids += (ids.empty() ? "" : " ") + std::to_string(id);
    out << r.index << ',' << csv_field(r.instruction) << ',' << csv_field(r.platform.value_or("")) << ','
        << csv_field(r.element_type.value_or("")) << ',' << groi << ',' << (r.groi_hit ? 1 : 0);
    for (bool p : r.pass) out << ',' << (p ? 1 : 0);
    out << ',' << r.lee << ',' << ids << ',' << csv_field(r.error.value_or("")) << '\n';
  }
  return out.str();
}

std::string report_summary_table(const EvalReport& report) {
  std::ostringstream out;
  char buf[128];
  auto row = [&](const std::string& name, const Aggregates& a) {
    std::snprintf(buf, sizeof buf, "%-16s %6zu %9.4f %9.4f", name.c_str(), a.count, a.groi_proposal_accuracy,
                  a.lee_mean);
    out << buf;
    for (double p : a.pass_at) {
      std::snprintf(buf, sizeof buf, " %8.4f", p);
      out << buf;
    }
    out << '\n';
  };
  std::snprintf(buf, sizeof buf, "%-16s %6s %9s %9s", "group", "n", "groi_acc", "lee");
  out << buf;
  for (int j = 1; j <= report.k; ++j) {
    std::snprintf(buf, sizeof buf, " %8s", ("pass@" + std::to_string(j)).c_str());
    out << buf;
  }
  out << '\n';
  row("overall", report.overall);
  for (const auto& [tag, a] : report.by_platform) row("platform:" + tag, a);
  for (const auto& [tag, a] : report.by_element_type) row("type:" + tag, a);
  return out.str();
}

}  // namespace screenparse
