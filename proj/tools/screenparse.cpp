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

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "screenparse/app.hpp"
#include "screenparse/candidates.hpp"
#include "screenparse/errors.hpp"
#include "screenparse/eval.hpp"
#include "screenparse/service.hpp"

namespace sp = screenparse;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::optional<std::string> config;
  std::optional<std::string> transport;
  std::optional<std::size_t> max_calls;

  sp::AppConfig app() const {
    return sp::AppConfig::resolve(config ? std::optional<fs::path>(*config) : std::nullopt);
  }
};

void add_common(CLI::App* cmd, Common& common, bool with_transport) {
  cmd->add_option("--config", common.config, "JSON config file (or SCREENPARSE_CONFIG)");
  if (with_transport) {
    cmd->add_option("--transport", common.transport, "replay:FILE | live | record:FILE");
    cmd->add_option("--max-calls", common.max_calls, "Fail once this many model calls were made");
  }
}

void write_output(const std::optional<std::string>& out, const std::string& text) {
  if (!out) {
    std::cout << text;
    return;
  }
  std::ofstream f(*out, std::ios::binary);
  if (!f || !(f << text)) throw sp::Error(sp::ErrorKind::kMalformedInput, "cannot write output: " + *out);
}

struct TransportStack {
  std::unique_ptr<sp::Transport> base;
  std::unique_ptr<sp::BudgetTransport> budget;
  sp::Transport& get() { return budget ? *budget : *base; }
};

TransportStack open_transport(const Common& common, const sp::AppConfig& cfg) {
  const std::optional<std::string> target = common.transport ? common.transport : cfg.transport;
  if (!target) throw sp::Error(sp::ErrorKind::kConfig, "no transport given; pass --transport replay:FILE or live");
  TransportStack stack;
  stack.base = sp::make_transport(*target);
  const auto max_calls = common.max_calls ? common.max_calls : cfg.max_calls;
  if (max_calls) stack.budget = std::make_unique<sp::BudgetTransport>(*stack.base, *max_calls);
  return stack;
}

// threshold flags win over the config file
struct HspFlags {
  std::optional<double> s_thresh, ios_overlap, ios_inside, groi, icon, button, redundant;
  std::optional<std::string> area_unit;

  json overrides() const {
    json j = json::object();
    auto put = [&](const char* key, const std::optional<double>& v) {
      if (v) j[key] = *v;
    };
    put("s_thresh", s_thresh);
    put("ios_overlap_thresh", ios_overlap);
    put("ios_inside_thresh", ios_inside);
    put("a_thresh_groi", groi);
    put("a_thresh_icon", icon);
    put("a_thresh_button", button);
    put("ios_redundant", redundant);
    if (area_unit) j["score_area_unit"] = *area_unit;
    return j;
  }
};

void add_hsp_flags(CLI::App* cmd, HspFlags& f) {
  cmd->add_option("--s-thresh", f.s_thresh, "GROI information-score floor");
  cmd->add_option("--ios-overlap", f.ios_overlap, "Partial-overlap IoS threshold");
  cmd->add_option("--ios-inside", f.ios_inside, "Containment IoS threshold");
  cmd->add_option("--groi-area", f.groi, "GROI area fraction");
  cmd->add_option("--icon-area", f.icon, "Icon area fraction upper bound");
  cmd->add_option("--button-area", f.button, "Button area fraction upper bound");
  cmd->add_option("--ios-redundant", f.redundant, "Redundancy IoS threshold");
  cmd->add_option("--area-unit", f.area_unit, "normalized | pixel");
}

sp::HspConfig hsp_config(const sp::AppConfig& cfg, sp::Task task, const HspFlags& flags) {
  return sp::apply_hsp_config_json(cfg.hsp_for(task), flags.overrides());
}

sp::ScreenHierarchy load_screen(const std::optional<std::string>& hierarchy, const std::optional<std::string>& candidates,
                                const sp::AppConfig& cfg, sp::Task task) {
  if (hierarchy) return sp::load_hierarchy(*hierarchy);
  if (candidates) return sp::parse_screen(sp::load_candidates(*candidates), cfg.hsp_for(task));
  throw sp::Error(sp::ErrorKind::kMalformedInput, "pass --hierarchy or --candidates");
}

sp::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical screen parsing, grounding and referring"};
  app.require_subcommand(1);

  Common common;

  // parse
  std::string p_candidates, p_task = "grounding";
  std::optional<std::string> p_out;
  HspFlags p_flags;
  auto* parse = app.add_subcommand("parse", "Build the GROI/element hierarchy from candidate boxes");
  parse->add_option("-c,--candidates", p_candidates, "Candidates JSON")->required();
  parse->add_option("--task", p_task, "grounding | referring threshold profile");
  parse->add_option("-o,--out", p_out, "Output file (default stdout)");
  add_hsp_flags(parse, p_flags);
  add_common(parse, common, false);

  // ground
  std::optional<std::string> g_hier, g_cands, g_out, g_gt;
  std::string g_image, g_instruction;
  int g_k = 1;
  auto* ground = app.add_subcommand("ground", "Locate the element an instruction refers to");
  ground->add_option("--hierarchy", g_hier, "Hierarchy JSON");
  ground->add_option("-c,--candidates", g_cands, "Candidates JSON, parsed with the grounding profile");
  ground->add_option("--image", g_image, "Screenshot PNG")->required();
  ground->add_option("--instruction", g_instruction, "Instruction text")->required();
  ground->add_option("-k", g_k, "Number of ranked candidates")->check(CLI::PositiveNumber);
  ground->add_option("--gt", g_gt, "Ground-truth box \"x1,y1,x2,y2\" for pass@k");
  ground->add_option("-o,--out", g_out, "Output file (default stdout)");
  add_common(ground, common, true);

  // refer
  std::optional<std::string> r_hier, r_cands, r_out, r_lenses;
  std::string r_image, r_point;
  auto* refer = app.add_subcommand("refer", "Describe the content and layout at a screen point");
  refer->add_option("--hierarchy", r_hier, "Hierarchy JSON");
  refer->add_option("-c,--candidates", r_cands, "Candidates JSON, parsed with the referring profile");
  refer->add_option("--image", r_image, "Screenshot PNG")->required();
  refer->add_option("--point", r_point, "Point \"x,y\" in image pixels")->required();
  refer->add_option("-o,--out", r_out, "Output file (default stdout)");
  refer->add_option("--lenses-out", r_lenses, "Directory for lens1.png and lens2.png");
  add_common(refer, common, true);

  // eval
  std::string e_manifest;
  std::optional<std::string> e_report, e_csv;
  int e_k = 3, e_workers = 1;
  HspFlags e_flags;
  auto* eval = app.add_subcommand("eval", "Run grounding over a manifest and report metrics");
  eval->add_option("--manifest", e_manifest, "JSON-lines manifest")->required();
  eval->add_option("-k", e_k, "Largest pass@k")->check(CLI::PositiveNumber);
  eval->add_option("--workers", e_workers, "Parallel samples")->check(CLI::PositiveNumber);
  eval->add_option("--report", e_report, "Report JSON path");
  eval->add_option("--csv", e_csv, "Per-sample CSV path");
  add_hsp_flags(eval, e_flags);
  add_common(eval, common, true);

  // annotate
  std::optional<std::string> a_hier, a_cands;
  std::string a_image, a_out, a_mode = "som";
  auto* annotate = app.add_subcommand("annotate", "Draw element tags or GROI boxes on a screenshot");
  annotate->add_option("--hierarchy", a_hier, "Hierarchy JSON");
  annotate->add_option("-c,--candidates", a_cands, "Candidates JSON, parsed with the grounding profile");
  annotate->add_option("--image", a_image, "Screenshot PNG")->required();
  annotate->add_option("--mode", a_mode, "som | grois")->check(CLI::IsMember({"som", "grois"}));
  annotate->add_option("-o,--out", a_out, "Output PNG")->required();
  add_common(annotate, common, false);

  // serve
  std::string s_bind = "127.0.0.1:8080";
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--bind", s_bind, "host:port");
  add_common(serve, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const sp::AppConfig cfg = common.app();

    if (*parse) {
      const sp::HspConfig hsp = hsp_config(cfg, sp::task_from_name(p_task), p_flags);
      write_output(p_out, sp::to_json_text(sp::run_parse(sp::load_candidates(p_candidates), hsp)));
      return 0;
    }

    if (*annotate) {
      const sp::ScreenHierarchy h = load_screen(a_hier, a_cands, cfg, sp::Task::kGrounding);
      const cv::Mat image = sp::load_image(a_image);
      cv::Mat out;
      if (a_mode == "som") {
        out = sp::draw_som(image, h.elements, cfg.style);
      } else {
        out = image;
        for (const sp::Groi& g : h.grois) out = sp::draw_region(out, g.box, "Region " + std::to_string(g.id), cfg.style);
      }
      sp::save_png(a_out, out);
      return 0;
    }

    if (*serve) {
      const auto colon = s_bind.rfind(':');
      if (colon == std::string::npos) throw sp::Error(sp::ErrorKind::kConfig, "--bind must be host:port");
      const std::string host = s_bind.substr(0, colon);
      const int port = std::stoi(s_bind.substr(colon + 1));
      TransportStack transport = open_transport(common, cfg);
      sp::Service service(cfg, transport.get());
      const int bound = service.bind(host, port);
      if (bound < 0) throw sp::Error(sp::ErrorKind::kConfig, "cannot bind " + s_bind);
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      sp::log_event("info", "listening", {{"host", host}, {"port", bound}});
      service.listen();
      g_service = nullptr;
      return 0;
    }

    TransportStack transport = open_transport(common, cfg);
    const sp::PromptSet prompts = cfg.prompts();
    sp::AgentContext ctx{transport.get(), prompts, cfg.style, cfg.lvlm};

    if (*ground) {
      sp::GroundRequest req;
      req.hierarchy = load_screen(g_hier, g_cands, cfg, sp::Task::kGrounding);
      req.image = sp::load_image(g_image);
      req.instruction = g_instruction;
      req.k = g_k;
      if (g_gt) {
        const std::string& t = *g_gt;
        json box = json::array();
        std::size_t start = 0;
        while (start <= t.size()) {
          const auto comma = t.find(',', start);
          const std::string part = t.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
          try {
            box.push_back(std::stod(part));
          } catch (const std::exception&) {
            throw sp::Error(sp::ErrorKind::kMalformedInput, "--gt must be \"x1,y1,x2,y2\"");
          }
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
        req.gt_box = sp::box_from_json(box, "--gt");
      }
      write_output(g_out, sp::to_json_text(sp::run_ground(req, ctx)));
      return 0;
    }

    if (*refer) {
      sp::ReferRequest req;
      req.hierarchy = load_screen(r_hier, r_cands, cfg, sp::Task::kReferring);
      req.image = sp::load_image(r_image);
      req.point = sp::parse_point(r_point);
      sp::LensPair lenses;
      const std::string text = sp::to_json_text(sp::run_refer(req, ctx, &lenses));
      if (r_lenses) {
        fs::create_directories(*r_lenses);
        sp::save_png(fs::path(*r_lenses) / "lens1.png", lenses.lens1);
        sp::save_png(fs::path(*r_lenses) / "lens2.png", lenses.lens2);
      }
      write_output(r_out, text);
      return 0;
    }

    if (*eval) {
      const auto samples = sp::load_manifest(e_manifest);
      sp::EvalOptions options;
      options.hsp = hsp_config(cfg, sp::Task::kGrounding, e_flags);
      options.k = e_k;
      options.workers = e_workers;
      const sp::EvalReport report = sp::run_eval(samples, ctx, options);
      if (e_report) write_output(e_report, sp::to_json_text(sp::report_to_json(report)));
      if (e_csv) write_output(e_csv, sp::report_to_csv(report));
      std::cout << sp::report_summary_table(report);
      return 0;
    }
  } catch (const sp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sp::exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
