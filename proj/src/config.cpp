#include "vmtrack/config.hpp"

#include <fmt/format.h>

#include <json.hpp>
#include <algorithm>
#include <set>

#include "vmtrack/error.hpp"
#include "vmtrack/io.hpp"

namespace vmtrack {

namespace {

using json = nlohmann::json;

class SectionReader {
 public:
  SectionReader(const json& doc, std::string section) : section_(std::move(section)) {
    if (!doc.contains(section_)) return;
    node_ = &doc.at(section_);
    if (!node_->is_object()) throw ValidationError("config key '" + section_ + "' must be an object");
  }

  /// Rejects keys that were never read.
  void finish() const {
    if (node_ == nullptr) return;
    for (const auto& [key, value] : node_->items()) {
      if (!known_.count(key)) throw ValidationError("unknown config key '" + section_ + "." + key + "'");
    }
  }

  template <typename T>
  void read(const std::string& key, T& target) {
    known_.insert(key);
    if (node_ == nullptr || !node_->contains(key)) return;
    const json& v = node_->at(key);
    const std::string name = section_ + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ValidationError("config key '" + name + "' must be a boolean");
      target = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ValidationError("config key '" + name + "' must be an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned()) {
          target = v.get<T>();
        } else if (v.get<std::int64_t>() >= 0) {
          target = static_cast<T>(v.get<std::int64_t>());
        } else {
          throw ValidationError("config key '" + name + "' must be non-negative");
        }
      } else {
        target = v.get<T>();
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ValidationError("config key '" + name + "' must be a number");
      target = v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ValidationError("config key '" + name + "' must be a string");
      target = v.get<std::string>();
    } else {
      static_assert(sizeof(T) == 0, "unsupported config field type");
    }
  }

  /// Returns the raw node for custom decoding, or nullptr when absent.
  const json* raw(const std::string& key) {
    known_.insert(key);
    if (node_ == nullptr || !node_->contains(key)) return nullptr;
    return &node_->at(key);
  }

  [[nodiscard]] std::string name(const std::string& key) const { return section_ + "." + key; }

 private:
  std::string section_;
  const json* node_ = nullptr;
  std::set<std::string> known_;
};

Rgb parse_color(const json& v, const std::string& name) {
  if (!v.is_string()) throw ValidationError("config key '" + name + "' entries must be \"#rrggbb\" strings");
  const std::string s = v.get<std::string>();
  if (s.size() != 7 || s[0] != '#') throw ValidationError("config key '" + name + "' entries must be \"#rrggbb\"");
  unsigned value = 0;
  for (std::size_t i = 1; i < 7; ++i) {
    const char c = s[i];
    unsigned digit = 0;
    if (c >= '0' && c <= '9') {
      digit = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      digit = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      digit = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw ValidationError("config key '" + name + "' has an invalid hex color '" + s + "'");
    }
    value = value * 16 + digit;
  }
  return {static_cast<std::uint8_t>(value >> 16), static_cast<std::uint8_t>((value >> 8) & 0xff),
          static_cast<std::uint8_t>(value & 0xff)};
}

}  // namespace

void Config::validate() const {
  vm.validate();
  convert.padding.validate();
  if (convert.threshold_px && !(*convert.threshold_px > 0.0)) {
    throw ValidationError("convert.threshold_px must be > 0 or null");
  }
  if (!(tracker.iou_min >= 0.0 && tracker.iou_min <= 1.0)) throw ValidationError("tracker.iou_min must be in [0, 1]");
  if (tracker.confirm_hits < 1) throw ValidationError("tracker.confirm_hits must be >= 1");
  if (tracker.max_misses < 0) throw ValidationError("tracker.max_misses must be >= 0");
  if (select.min_gap < 0) throw ValidationError("select.min_gap must be >= 0");
  if (select.count < 1) throw ValidationError("select.count must be >= 1");
  sim.validate();
  degrade.validate();
  if (!(eval.alpha_for_counts > 0.0 && eval.alpha_for_counts < 1.0)) {
    throw ValidationError("eval.alpha_for_counts must be in (0, 1)");
  }
}

Config parse_config(std::string_view json_text, const std::string& source) {
  json doc = json::object();
  if (json_text.find_first_not_of(" \t\r\n") != std::string_view::npos) {
    try {
      doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
      // e.byte counts characters consumed up to and including the offending one.
      const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, json_text.size());
      const auto line = 1 + static_cast<std::size_t>(std::count(json_text.begin(), json_text.begin() + end, '\n'));
      throw ParseError(source, line, "invalid JSON");
    }
  }
  if (!doc.is_object()) throw ValidationError(source + ": config document must be a JSON object");
  static const std::set<std::string> sections{"vm", "convert", "tracker", "select", "sim", "degrade", "eval"};
  for (const auto& [key, value] : doc.items()) {
    if (!sections.count(key)) throw ValidationError("unknown config key '" + key + "'");
  }

  Config cfg;
  {
    SectionReader r(doc, "vm");
    r.read("size_px", cfg.vm.size_px);
    r.read("quantity", cfg.vm.quantity);
    if (const json* p = r.raw("palette")) {
      if (!p->is_array() || p->size() != cfg.vm.palette.size()) {
        throw ValidationError("config key 'vm.palette' must be an array of 6 colors");
      }
      for (std::size_t i = 0; i < cfg.vm.palette.size(); ++i) cfg.vm.palette[i] = parse_color((*p)[i], "vm.palette");
    }
    r.finish();
  }
  {
    SectionReader r(doc, "convert");
    std::string method(to_string(cfg.convert.method));
    r.read("method", method);
    cfg.convert.method = parse_convert_method(method);
    r.read("pad_x_frac", cfg.convert.padding.pad_x_frac);
    r.read("pad_top_frac", cfg.convert.padding.pad_top_frac);
    r.read("pad_bottom_frac", cfg.convert.padding.pad_bottom_frac);
    if (const json* t = r.raw("threshold_px")) {
      if (t->is_null()) {
        cfg.convert.threshold_px.reset();
      } else if (t->is_number()) {
        cfg.convert.threshold_px = t->get<double>();
      } else {
        throw ValidationError("config key 'convert.threshold_px' must be a number or null");
      }
    }
    r.finish();
  }
  {
    SectionReader r(doc, "tracker");
    r.read("iou_min", cfg.tracker.iou_min);
    r.read("confirm_hits", cfg.tracker.confirm_hits);
    r.read("max_misses", cfg.tracker.max_misses);
    r.finish();
  }
  {
    SectionReader r(doc, "select");
    r.read("min_gap", cfg.select.min_gap);
    r.read("count", cfg.select.count);
    r.read("seed", cfg.select.seed);
    r.finish();
  }
  {
    SectionReader r(doc, "sim");
    r.read("players", cfg.sim.players);
    r.read("frames", cfg.sim.frames);
    r.read("width", cfg.sim.width);
    r.read("height", cfg.sim.height);
    r.read("seed", cfg.sim.seed);
    r.read("random_screen_events", cfg.sim.random_screen_events);
    r.read("body_height_min", cfg.sim.body_height_min);
    r.read("body_height_max", cfg.sim.body_height_max);
    r.read("arm_extent_frac", cfg.sim.arm_extent_frac);
    if (const json* events = r.raw("screen_events")) {
      if (!events->is_array()) throw ValidationError("config key 'sim.screen_events' must be an array");
      for (const json& e : *events) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
            !e[2].is_number_integer()) {
          throw ValidationError("config key 'sim.screen_events' entries must be [frame, player_a, player_b]");
        }
        cfg.sim.screen_events.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>()});
      }
    }
    r.finish();
  }
  {
    SectionReader r(doc, "degrade");
    r.read("keypoint_noise_px", cfg.degrade.keypoint_noise_px);
    r.read("miss_rate", cfg.degrade.miss_rate);
    r.read("detector_miss_rate", cfg.degrade.detector_miss_rate);
    r.read("id_swap_rate", cfg.degrade.id_swap_rate);
    r.read("seed", cfg.degrade.seed);
    r.finish();
  }
  {
    SectionReader r(doc, "eval");
    r.read("alpha_for_counts", cfg.eval.alpha_for_counts);
    std::string kind = cfg.eval.std_kind == StdKind::sample ? "sample" : "population";
    r.read("std", kind);
    if (kind == "sample") {
      cfg.eval.std_kind = StdKind::sample;
    } else if (kind == "population") {
      cfg.eval.std_kind = StdKind::population;
    } else {
      throw ValidationError("config key 'eval.std' must be 'sample' or 'population'");
    }
    r.finish();
  }
  cfg.validate();
  return cfg;
}

Config read_config(const std::filesystem::path& path) { return parse_config(read_text(path), path.string()); }

std::string format_config(const Config& cfg) {
  json palette = json::array();
  for (const Rgb& c : cfg.vm.palette) palette.push_back(fmt::format("#{:02x}{:02x}{:02x}", c.r, c.g, c.b));
  json events = json::array();
  for (const ScreenEvent& e : cfg.sim.screen_events) events.push_back({e.frame, e.player_a, e.player_b});

  json doc;
  doc["vm"] = {{"size_px", cfg.vm.size_px}, {"quantity", cfg.vm.quantity}, {"palette", palette}};
  doc["convert"] = {{"method", std::string(to_string(cfg.convert.method))},
                    {"pad_x_frac", cfg.convert.padding.pad_x_frac},
                    {"pad_top_frac", cfg.convert.padding.pad_top_frac},
                    {"pad_bottom_frac", cfg.convert.padding.pad_bottom_frac},
                    {"threshold_px", cfg.convert.threshold_px ? json(*cfg.convert.threshold_px) : json(nullptr)}};
  doc["tracker"] = {{"iou_min", cfg.tracker.iou_min},
                    {"confirm_hits", cfg.tracker.confirm_hits},
                    {"max_misses", cfg.tracker.max_misses}};
  doc["select"] = {{"min_gap", cfg.select.min_gap}, {"count", cfg.select.count}, {"seed", cfg.select.seed}};
  doc["sim"] = {{"players", cfg.sim.players},
                {"frames", cfg.sim.frames},
                {"width", cfg.sim.width},
                {"height", cfg.sim.height},
                {"seed", cfg.sim.seed},
                {"screen_events", events},
                {"random_screen_events", cfg.sim.random_screen_events},
                {"body_height_min", cfg.sim.body_height_min},
                {"body_height_max", cfg.sim.body_height_max},
                {"arm_extent_frac", cfg.sim.arm_extent_frac}};
  doc["degrade"] = {{"keypoint_noise_px", cfg.degrade.keypoint_noise_px},
                    {"miss_rate", cfg.degrade.miss_rate},
                    {"detector_miss_rate", cfg.degrade.detector_miss_rate},
                    {"id_swap_rate", cfg.degrade.id_swap_rate},
                    {"seed", cfg.degrade.seed}};
  doc["eval"] = {{"alpha_for_counts", cfg.eval.alpha_for_counts},
                 {"std", cfg.eval.std_kind == StdKind::sample ? "sample" : "population"}};
  return doc.dump(2) + "\n";
}

}  // namespace vmtrack
