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

// Writes the toy-screen fixture set: screenshots, candidate files, parsed
// hierarchies, task and eval manifests, golden lenses and the replay
// transcript of scripted model answers.
//
//   make_fixtures OUT_DIR

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <opencv2/imgproc.hpp>

#include "screenparse/annotate.hpp"
#include "screenparse/app.hpp"
#include "screenparse/candidates.hpp"
#include "screenparse/errors.hpp"
#include "screenparse/eval.hpp"
#include "screenparse/grounding.hpp"
#include "screenparse/referring.hpp"

namespace sp = screenparse;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;

struct PanelLayout {
  sp::BBox box;
  double heading_y;
  double first_row_y;
  double row_step;
};

// panel 0 on top, panel 1 below
const PanelLayout kPanels[2] = {
    {{20, 50, 620, 265}, 54, 76, 46},
    {{20, 275, 620, 470}, 279, 301, 42},
};

struct ScreenDef {
  std::string name;
  std::string platform;
  std::string title;
  std::string headings[2];
  std::vector<std::string> labels[2];  // 12 per panel, row-major 4x3
  int cells[2] = {12, 12};
  bool distractor = false;
};

sp::BBox icon_box(int panel, int cell) {
  const PanelLayout& p = kPanels[panel];
  const double x0 = 30 + 200 * (cell % 3);
  const double y = p.first_row_y + p.row_step * (cell / 3);
  return {x0, y, x0 + 40, y + 40};
}

sp::BBox text_box(int panel, int cell) {
  const sp::BBox icon = icon_box(panel, cell);
  return {icon.x1 + 50, icon.y1 + 10, icon.x1 + 180, icon.y1 + 30};
}

sp::BBox heading_box(int panel) { return {30, kPanels[panel].heading_y, 200, kPanels[panel].heading_y + 18}; }
sp::BBox button_box(int panel) { return {580, kPanels[panel].heading_y, 604, kPanels[panel].heading_y + 18}; }
sp::BBox gap_box(int panel, int cell) {
  const sp::BBox icon = icon_box(panel, cell);
  return {icon.x1 + 182, icon.y1 + 12, icon.x1 + 198, icon.y1 + 28};
}
const sp::BBox kTitleBox{20, 12, 300, 34};
const sp::BBox kDistractorBox{20, 200, 620, 330};

std::vector<ScreenDef> screen_defs() {
  std::vector<ScreenDef> s(6);
  s[0] = {"account", "mobile", "Account settings", {"Account", "Shortcuts"},
          {{"Sign in", "Register", "Password", "Username", "Remember me", "Help center", "Privacy", "Terms of use",
            "Language", "Dark mode", "Notifications", "Storage"},
           {"Camera", "Gallery", "Music player", "Podcasts", "Weather", "Calendar", "Contacts", "Messages",
            "Settings", "Calculator", "Recorder", "Compass"}}};
  s[1] = {"mail", "desktop", "Mail client", {"Folders", "Compose"},
          {{"Inbox", "Starred", "Snoozed", "Sent mail", "Drafts", "Spam folder", "Trash bin", "Archive", "Labels",
            "Important", "Scheduled", "All mail"},
           {"Attach file", "Insert link", "Emoji picker", "Signature", "Bold text", "Italic text", "Underline",
            "Bullet list", "Numbered list", "Undo edit", "Redo edit", "Send message"}}};
  s[1].distractor = true;
  s[2] = {"shop", "web", "Online store", {"Categories", "Your cart"},
          {{"Laptops", "Phones", "Tablets", "Cameras", "Headphones", "Speakers", "Monitors", "Keyboards", "Printers",
            "Routers", "Storage", "Gaming"},
           {"Checkout", "Apply coupon", "Gift wrap", "Remove item", "Save for later", "Shipping", "Returns",
            "Track order", "Wishlist", "Payments", "Reviews", "Support"}}};
  s[3] = {"music", "mobile", "Music library", {"Library", "Player"},
          {{"Playlists", "Artists", "Albums", "Songs list", "Genres", "Downloads", "Recently played", "Favorites",
            "Radio mode", "Podcasts", "Audiobooks", "Charts"},
           {"Shuffle", "Repeat", "Previous", "Play track", "Next track", "Volume up", "Volume down", "Lyrics",
            "Queue list", "Equalizer", "Sleep timer", "Share song"}}};
  s[3].distractor = true;
  s[4] = {"editor", "desktop", "Code editor", {"Explorer", "Terminal"},
          {{"New file", "New folder", "Refresh", "Collapse", "Open file", "Save file", "Rename", "Delete file",
            "Copy path", "Reveal file", "Compare", "Find files"},
           {"Run task", "Debug run", "Stop process", "Restart", "Split pane", "Kill shell", "Clear output",
            "Build project", "Run tests", "Format code", "Git commit", "Git push"}}};
  s[5] = {"travel", "web", "Travel planner", {"Flights", "Hotels"},
          {{"Departure", "Arrival", "One way", "Round trip", "Passengers", "Economy", "Business", "Search flights",
            "Flexible dates", "Nearby airports", "Direct only", "Price alerts"},
           {"Check in", "Check out", "Guests", "Rooms", "Free wifi", "Breakfast", "Parking", "Pool access",
            "Pet friendly", "Sort by price", "Map view", "Book now"}}};
  s[5].distractor = true;
  return s;
}

// one panel with 26 elements, one with 15, straddling the two score floors
ScreenDef straddle_def() {
  ScreenDef d = screen_defs()[4];
  d.name = "straddle";
  d.cells[1] = 7;
  d.distractor = false;
  return d;
}

sp::CandidateSet candidates_for(const ScreenDef& d) {
  sp::CandidateSet c;
  c.image = {kWidth, kHeight, d.name + ".png"};
  c.ocr.push_back({kTitleBox, d.title, 0.99});
  for (int p = 0; p < 2; ++p) {
    c.sam.push_back({kPanels[p].box, 0.97});
    c.ocr.push_back({heading_box(p), d.headings[p], 0.98});
    c.sam.push_back({button_box(p), 0.91});
    for (int i = 0; i < d.cells[p]; ++i) {
      c.sam.push_back({icon_box(p, i), 0.93});
      c.ocr.push_back({text_box(p, i), d.labels[p][static_cast<std::size_t>(i)], 0.95});
    }
  }
  if (d.distractor) c.sam.push_back({kDistractorBox, 0.62});
  return c;
}

cv::Rect rect(const sp::BBox& b) {
  return {static_cast<int>(b.x1), static_cast<int>(b.y1), static_cast<int>(b.width()), static_cast<int>(b.height())};
}

void put_text(cv::Mat& img, const std::string& text, const sp::BBox& b, double scale, const cv::Scalar& color) {
  cv::putText(img, text, {static_cast<int>(b.x1) + 2, static_cast<int>(b.y2) - 5}, cv::FONT_HERSHEY_SIMPLEX, scale,
              color, 1, cv::LINE_8);
}

cv::Mat render(const ScreenDef& d) {
  cv::Mat img = sp::blank_canvas(kWidth, kHeight);
  cv::rectangle(img, cv::Rect(0, 0, kWidth, 44), {235, 225, 215}, cv::FILLED);
  put_text(img, d.title, kTitleBox, 0.6, {40, 40, 40});
  for (int p = 0; p < 2; ++p) {
    cv::rectangle(img, rect(kPanels[p].box), {244, 244, 244}, cv::FILLED);
    cv::rectangle(img, rect(kPanels[p].box), {190, 190, 190}, 1);
    put_text(img, d.headings[p], heading_box(p), 0.5, {20, 20, 20});
    const sp::BBox btn = button_box(p);
    cv::rectangle(img, rect(btn), {90, 90, 90}, cv::FILLED);
    cv::line(img, {static_cast<int>(btn.x1) + 7, static_cast<int>(btn.y1) + 4},
             {static_cast<int>(btn.x2) - 7, static_cast<int>(btn.y2) - 4}, {255, 255, 255}, 2);
    cv::line(img, {static_cast<int>(btn.x2) - 7, static_cast<int>(btn.y1) + 4},
             {static_cast<int>(btn.x1) + 7, static_cast<int>(btn.y2) - 4}, {255, 255, 255}, 2);
    for (int i = 0; i < d.cells[p]; ++i) {
      const std::string& label = d.labels[p][static_cast<std::size_t>(i)];
      unsigned hash = 2166136261u;
      for (char ch : label) hash = (hash ^ static_cast<unsigned char>(ch)) * 16777619u;
      const cv::Scalar color(60 + hash % 160, 60 + (hash >> 8) % 160, 60 + (hash >> 16) % 160);
      const sp::BBox icon = icon_box(p, i);
      cv::rectangle(img, rect(icon), color, cv::FILLED);
      cv::circle(img, {static_cast<int>(icon.center().x), static_cast<int>(icon.center().y)}, 10 + hash % 6,
                 {255, 255, 255}, cv::FILLED);
      put_text(img, label, text_box(p, i), 0.42, {30, 30, 30});
    }
  }
  // a notification dot the detectors missed
  const sp::BBox dot = gap_box(0, 0);
  cv::circle(img, {static_cast<int>(dot.center().x), static_cast<int>(dot.center().y)}, 6, {40, 40, 230}, cv::FILLED);
  return img;
}

// ---- identity of parsed elements ------------------------------------------

enum class Role { kTitle, kHeading, kButton, kIcon, kText };

struct Ref {
  Role role;
  int panel = 0;
  int cell = 0;
};

sp::BBox box_of(const Ref& r) {
  switch (r.role) {
    case Role::kTitle: return kTitleBox;
    case Role::kHeading: return heading_box(r.panel);
    case Role::kButton: return button_box(r.panel);
    case Role::kIcon: return icon_box(r.panel, r.cell);
    case Role::kText: return text_box(r.panel, r.cell);
  }
  return {};
}

struct Screen {
  ScreenDef def;
  sp::CandidateSet candidates;
  cv::Mat image;
  sp::ScreenHierarchy grounding;
  sp::ScreenHierarchy referring;
};

int id_of(const sp::ScreenHierarchy& h, const Ref& r) {
  const sp::BBox b = box_of(r);
  for (const sp::LocalElement& e : h.elements) {
    if (e.box == b) return e.id;
  }
  throw std::runtime_error("fixture element missing after parsing");
}

int groi_of(const sp::ScreenHierarchy& h, int panel) {
  for (const sp::Groi& g : h.grois) {
    if (g.box == kPanels[panel].box) return g.id;
  }
  throw std::runtime_error("fixture panel missing after parsing");
}

std::optional<Ref> ref_of(const Screen& s, const sp::LocalElement& e) {
  if (e.box == kTitleBox) return Ref{Role::kTitle};
  for (int p = 0; p < 2; ++p) {
    if (e.box == heading_box(p)) return Ref{Role::kHeading, p};
    if (e.box == button_box(p)) return Ref{Role::kButton, p};
    for (int i = 0; i < s.def.cells[p]; ++i) {
      if (e.box == icon_box(p, i)) return Ref{Role::kIcon, p, i};
      if (e.box == text_box(p, i)) return Ref{Role::kText, p, i};
    }
  }
  return std::nullopt;
}

// ---- scripted model -------------------------------------------------------

struct Job {
  const Screen* screen = nullptr;
  const sp::ScreenHierarchy* hierarchy = nullptr;
  std::string proposal;  // raw proposal answer
  std::vector<Ref> ranked;
  std::string content, layout;
};

Job* g_job = nullptr;

std::string all_text(const sp::LvlmRequest& req) {
  std::string out;
  for (const sp::UserPart& part : req.user_parts) {
    if (const auto* t = std::get_if<sp::TextPart>(&part)) out += t->text + "\n";
  }
  return out;
}

std::string seed_answer(const std::string& prompt) {
  const Screen& s = *g_job->screen;
  const sp::ScreenHierarchy& h = *g_job->hierarchy;
  json out = json::array();
  static const std::regex line_re(R"(^(\d+), (icon|button|text|picture), \[)", std::regex::multiline);
  const auto listing_at = prompt.rfind("Detected elements");
  const std::string listing = prompt.substr(listing_at);
  for (auto it = std::sregex_iterator(listing.begin(), listing.end(), line_re); it != std::sregex_iterator(); ++it) {
    const int id = std::stoi((*it)[1].str());
    const sp::LocalElement* e = h.find_element(id);
    const auto ref = e ? ref_of(s, *e) : std::nullopt;
    if (!ref) continue;
    const std::string& label =
        ref->role == Role::kIcon || ref->role == Role::kText ? s.def.labels[ref->panel][static_cast<std::size_t>(ref->cell)] : "";
    switch (ref->role) {
      case Role::kTitle:
        out.push_back({{"id", id}, {"label", "standalone"}, {"associated", json::array()},
                       {"description", "screen title \"" + s.def.title + "\" in the top bar"}});
        break;
      case Role::kHeading:
        out.push_back({{"id", id}, {"label", "standalone"}, {"associated", json::array()},
                       {"description", "heading of the " + s.def.headings[ref->panel] + " panel"}});
        break;
      case Role::kButton:
        out.push_back({{"id", id}, {"label", "standalone"}, {"associated", json::array()},
                       {"description", "close button of the " + s.def.headings[ref->panel] + " panel"}});
        break;
      case Role::kIcon:
        out.push_back({{"id", id}, {"label", "paired"},
                       {"associated", {id_of(h, {Role::kText, ref->panel, ref->cell})}},
                       {"description", "icon that opens " + label + ", shown left of its caption"}});
        break;
      case Role::kText:
        out.push_back({{"id", id}, {"label", "paired"},
                       {"associated", {id_of(h, {Role::kIcon, ref->panel, ref->cell})}},
                       {"description", "caption \"" + label + "\" of the icon to its left"}});
        break;
    }
  }
  return "Here is the labelling:\n```json\n" + out.dump() + "\n```";
}

std::string respond(const sp::LvlmRequest& req) {
  const std::string text = all_text(req);
  if (text.starts_with("You are helping")) return g_job->proposal;
  if (text.starts_with("You are given a screenshot")) return seed_answer(text);
  if (text.starts_with("The image shows part")) {
    json ids = json::array();
    for (const Ref& r : g_job->ranked) ids.push_back(id_of(*g_job->hierarchy, r));
    return json{{"ranked_ids", ids}}.dump();
  }
  if (text.starts_with("A user pointed")) return "Content: " + g_job->content + "\nLayout: " + g_job->layout;
  throw std::runtime_error("unexpected prompt");
}

struct Recorder {
  std::vector<std::pair<std::string, std::string>> entries;
  std::map<std::string, std::size_t> seen;

  sp::ScriptedTransport transport() {
    return sp::ScriptedTransport([this](const sp::LvlmRequest& req) {
      const std::string reply = respond(req);
      const std::string digest = sp::request_digest(req);
      if (seen.emplace(digest, entries.size()).second) entries.emplace_back(digest, reply);
      return reply;
    });
  }

  void write(const fs::path& path) const {
    std::ofstream out(path, std::ios::binary);
    for (const auto& [digest, reply] : entries) out << json{{"digest", digest}, {"response", reply}}.dump() << '\n';
  }
};

std::string proposal_json(const Screen& s, int panel) {
  json desc = json::object();
  for (int p = 0; p < 2; ++p) {
    desc[std::to_string(groi_of(s.grounding, p))] = s.def.headings[p] + " panel";
  }
  return json{{"descriptions", desc}, {"groi_id", groi_of(s.grounding, panel)}}.dump();
}

struct SampleDef {
  int screen;
  std::string instruction;
  std::string element_type;
  std::optional<Ref> target;  // nullopt: the missed notification dot
  int proposed_panel;         // -1: an invalid region id
  std::vector<Ref> ranked;
};

std::vector<SampleDef> sample_defs() {
  const auto T = [](int p, int c) { return Ref{Role::kText, p, c}; };
  const auto I = [](int p, int c) { return Ref{Role::kIcon, p, c}; };
  return {
      {0, "click the sign-in button", "text", T(0, 0), 0, {T(0, 0), T(0, 1)}},
      {0, "open the music player", "icon", I(1, 2), 1, {I(1, 0), I(1, 2), T(1, 2)}},
      {1, "open the drafts folder", "text", T(0, 4), 0, {T(0, 4)}},
      {1, "attach a file to the email", "icon", I(1, 0), 1, {T(1, 0), I(1, 1), I(1, 0)}},
      {2, "browse laptops", "text", T(0, 0), 0, {T(0, 0), I(0, 0)}},
      {2, "apply a discount coupon", "text", T(1, 1), 0, {T(0, 10), T(0, 11), T(0, 9)}},
      {3, "turn on shuffle", "icon", I(1, 0), 1, {I(1, 0), T(1, 0)}},
      {3, "dismiss the notification dot", "icon", std::nullopt, 0, {I(0, 0), I(0, 1), T(0, 0)}},
      {4, "create a new file", "icon", I(0, 0), 0, {T(0, 0), I(0, 0)}},
      {4, "run the tests", "text", T(1, 8), 1, {T(1, 8), T(1, 4)}},
      {5, "book the hotel", "text", T(1, 11), 0, {T(0, 7), T(0, 11)}},
      {5, "search for flights", "text", T(0, 7), -1, {T(0, 7)}},
  };
}

struct ReferDef {
  int screen;
  std::optional<Ref> target;  // nullopt: empty space inside panel 0
  std::string content, layout;
};

sp::Point refer_point(const ReferDef& r) {
  if (!r.target) {
    const sp::BBox g = gap_box(0, 4);
    return {g.center().x, g.y1 - 8};
  }
  const sp::Point c = box_of(*r.target).center();
  return {std::floor(c.x) + 3, std::floor(c.y) + 1};
}

std::vector<ReferDef> refer_defs() {
  return {
      {0, Ref{Role::kText, 0, 2}, "The text \"Password\", a caption for the password setting.",
       "Third item in the first row of the Account panel, to the right of a key-shaped icon."},
      {1, Ref{Role::kIcon, 1, 2}, "An icon that opens the emoji picker.",
       "Top-right cell of the Compose panel in the lower half of the mail client."},
      {2, std::nullopt, "Empty space between product categories.",
       "Inside the Categories panel, between the Tablets and Cameras rows."},
      {3, Ref{Role::kText, 0, 2}, "The text \"Albums\", opening the album list.",
       "First row of the Library panel, right column."},
      {4, Ref{Role::kButton, 1}, "A small dark button with a cross that closes the panel.",
       "Top-right corner of the Terminal panel."},
      {5, Ref{Role::kTitle}, "The screen title \"Travel planner\".",
       "Top bar of the page, above the Flights panel."},
  };
}

json box_json(const sp::BBox& b) { return sp::box_to_json(b); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures OUT_DIR\n";
    return 2;
  }
  const fs::path out = argv[1];
  try {
    fs::create_directories(out / "screens");
    fs::create_directories(out / "eval");
    fs::create_directories(out / "lenses");

    const sp::HspConfig grounding_cfg = sp::HspConfig::for_task(sp::Task::kGrounding);
    const sp::HspConfig referring_cfg = sp::HspConfig::for_task(sp::Task::kReferring);

    std::vector<Screen> screens;
    for (const ScreenDef& d : screen_defs()) {
      Screen s;
      s.def = d;
      s.candidates = candidates_for(d);
      s.image = render(d);
      s.grounding = sp::parse_screen(s.candidates, grounding_cfg);
      s.referring = sp::parse_screen(s.candidates, referring_cfg);
      const fs::path dir = out / "screens";
      sp::save_png(dir / (d.name + ".png"), s.image);
      write_text(dir / (d.name + ".candidates.json"), sp::to_json_text(sp::candidates_to_json(s.candidates)));
      write_text(dir / (d.name + ".hierarchy.json"), sp::to_json_text(sp::hierarchy_to_json(s.grounding)));
      write_text(dir / (d.name + ".referring.json"), sp::to_json_text(sp::hierarchy_to_json(s.referring)));
      screens.push_back(std::move(s));
    }
    {
      const ScreenDef d = straddle_def();
      write_text(out / "straddle.candidates.json", sp::to_json_text(sp::candidates_to_json(candidates_for(d))));
    }

    Recorder recorder;
    sp::ScriptedTransport transport = recorder.transport();
    const sp::PromptSet prompts = sp::PromptSet::defaults();
    sp::AgentContext ctx{transport, prompts};

    // eval manifest: every sample grounded once through the real pipeline
    std::string manifest;
    json tasks = json::array();
    const auto samples = sample_defs();
    for (const SampleDef& def : samples) {
      const Screen& s = screens[static_cast<std::size_t>(def.screen)];
      Job job{&s, &s.grounding};
      job.proposal = def.proposed_panel < 0 ? R"({"descriptions": {}, "groi_id": 7})" : proposal_json(s, def.proposed_panel);
      job.ranked = def.ranked;
      g_job = &job;
      const sp::BBox gt = def.target ? box_of(*def.target) : gap_box(0, 0);
      const sp::GroundingTask task{def.instruction, s.grounding, s.image};
      sp::ground(task, ctx, 3);

      const std::string stem = "../screens/" + s.def.name;
      manifest += json{{"candidates", stem + ".candidates.json"},
                       {"image", stem + ".png"},
                       {"instruction", def.instruction},
                       {"gt_box", box_json(gt)},
                       {"platform", s.def.platform},
                       {"element_type", def.element_type}}
                      .dump() +
                  "\n";
      if (&def == &samples[static_cast<std::size_t>(def.screen) * 2]) {
        tasks.push_back({{"screen", s.def.name},
                         {"image", "screens/" + s.def.name + ".png"},
                         {"candidates", "screens/" + s.def.name + ".candidates.json"},
                         {"hierarchy", "screens/" + s.def.name + ".hierarchy.json"},
                         {"referring_hierarchy", "screens/" + s.def.name + ".referring.json"},
                         {"platform", s.def.platform},
                         {"instruction", def.instruction},
                         {"k", 3},
                         {"gt_box", box_json(gt)}});
      }
    }
    write_text(out / "eval" / "manifest.jsonl", manifest);

    // referring: one point per screen; lenses of the first three kept as goldens
    for (const ReferDef& def : refer_defs()) {
      const Screen& s = screens[static_cast<std::size_t>(def.screen)];
      Job job{&s, &s.referring};
      job.content = def.content;
      job.layout = def.layout;
      g_job = &job;
      const sp::Point p = refer_point(def);
      sp::LensPair lenses;
      const sp::ReferringResult r = sp::refer(s.referring, s.image, p, ctx, &lenses);
      json& t = tasks[static_cast<std::size_t>(def.screen)];
      t["point"] = {p.x, p.y};
      t["refer"] = sp::referring_result_to_json(r);
      if (def.screen < 3) {
        const std::string name = "lens1_" + s.def.name + ".png";
        sp::save_png(out / "lenses" / name, lenses.lens1);
        t["golden_lens1"] = "lenses/" + name;
      }
    }
    write_text(out / "tasks.json", sp::to_json_text(tasks));
    recorder.write(out / "replay.jsonl");
    std::cout << "wrote " << screens.size() << " screens, " << samples.size() << " eval samples, "
              << recorder.entries.size() << " recorded exchanges to " << out.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
