#include "vmtrack/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fmt/format.h>
#include <mutex>
#include <optional>
#include <thread>

#include "vmtrack/bbox_convert.hpp"
#include "vmtrack/config.hpp"
#include "vmtrack/error.hpp"
#include "vmtrack/frame_select.hpp"
#include "vmtrack/hota.hpp"
#include "vmtrack/io.hpp"
#include "vmtrack/report.hpp"
#include "vmtrack/sim.hpp"
#include "vmtrack/tracker.hpp"
#include "vmtrack/vm_engine.hpp"

namespace vmtrack {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kSeqToken = "{seq}";

// A path argument naming one file, a directory of <seq>.txt files, or a pattern with "{seq}"
// standing for each subdirectory of the pattern's prefix.
struct SeqFile {
  std::string name;
  fs::path path;
};

bool is_pattern(const std::string& path_arg) { return path_arg.find(kSeqToken) != std::string::npos; }

fs::path expand(const std::string& path_arg, const std::string& seq) {
  std::string s = path_arg;
  const auto pos = s.find(kSeqToken);
  if (pos != std::string::npos) s.replace(pos, kSeqToken.size(), seq);
  return s;
}

std::vector<SeqFile> enumerate_sequences(const std::string& path_arg) {
  std::vector<SeqFile> out;
  if (is_pattern(path_arg)) {
    const auto pos = path_arg.find(kSeqToken);
    const fs::path root = path_arg.substr(0, pos).empty() ? fs::path(".") : fs::path(path_arg.substr(0, pos));
    if (!fs::is_directory(root)) throw IoError("no such directory " + root.string());
    for (const auto& entry : fs::directory_iterator(root)) {
      if (!entry.is_directory()) continue;
      const std::string name = entry.path().filename().string();
      const fs::path candidate = expand(path_arg, name);
      if (fs::is_regular_file(candidate)) out.push_back({name, candidate});
    }
  } else if (fs::is_directory(path_arg)) {
    for (const auto& entry : fs::directory_iterator(path_arg)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        out.push_back({entry.path().stem().string(), entry.path()});
      }
    }
  } else if (fs::is_regular_file(path_arg)) {
    out.push_back({fs::path(path_arg).stem().string(), path_arg});
  } else {
    throw IoError("no such file or directory " + path_arg);
  }
  std::sort(out.begin(), out.end(), [](const SeqFile& a, const SeqFile& b) { return a.name < b.name; });
  if (out.empty()) throw IoError("no sequences found under " + path_arg);
  return out;
}

fs::path resolve_companion(const std::string& path_arg, const SeqFile& seq, std::size_t total) {
  if (is_pattern(path_arg)) return expand(path_arg, seq.name);
  if (fs::is_directory(path_arg)) return fs::path(path_arg) / (seq.name + ".txt");
  if (total > 1) throw ValidationError("'" + path_arg + "' names one file but " + std::to_string(total) + " sequences were given");
  return path_arg;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  }
  if (failure) std::rethrow_exception(failure);
}

template <typename T>
void override_if(const CLI::Option* option, const T& value, T& target) {
  if (option->count() > 0) target = value;
}

struct Common {
  std::string config_path;
  int jobs = 1;
};

Config load_config(const Common& common) {
  return common.config_path.empty() ? Config{} : read_config(common.config_path);
}

// ---------------------------------------------------------------------------------------------

struct SimulateArgs {
  std::string out_dir;
  int count = 1;
  bool render = false;
  std::uint64_t seed = ScenarioConfig{}.seed;
  std::uint64_t degrade_seed = DegradationConfig{}.seed;
  int frames = ScenarioConfig{}.frames;
  int players = ScenarioConfig{}.players;
  int events = ScenarioConfig{}.random_screen_events;
  double arm = ScenarioConfig{}.arm_extent_frac;
  double noise = DegradationConfig{}.keypoint_noise_px;
  double miss = DegradationConfig{}.miss_rate;
  double det_miss = DegradationConfig{}.detector_miss_rate;
  double swap = DegradationConfig{}.id_swap_rate;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_degrade_seed = nullptr;
  CLI::Option* o_frames = nullptr;
  CLI::Option* o_players = nullptr;
  CLI::Option* o_events = nullptr;
  CLI::Option* o_arm = nullptr;
  CLI::Option* o_noise = nullptr;
  CLI::Option* o_miss = nullptr;
  CLI::Option* o_det_miss = nullptr;
  CLI::Option* o_swap = nullptr;
};

void run_simulate(const Common& common, const SimulateArgs& a, std::ostream& out) {
  Config cfg = load_config(common);
  override_if(a.o_seed, a.seed, cfg.sim.seed);
  override_if(a.o_degrade_seed, a.degrade_seed, cfg.degrade.seed);
  override_if(a.o_frames, a.frames, cfg.sim.frames);
  override_if(a.o_players, a.players, cfg.sim.players);
  override_if(a.o_events, a.events, cfg.sim.random_screen_events);
  override_if(a.o_arm, a.arm, cfg.sim.arm_extent_frac);
  override_if(a.o_noise, a.noise, cfg.degrade.keypoint_noise_px);
  override_if(a.o_miss, a.miss, cfg.degrade.miss_rate);
  override_if(a.o_det_miss, a.det_miss, cfg.degrade.detector_miss_rate);
  override_if(a.o_swap, a.swap, cfg.degrade.id_swap_rate);
  cfg.validate();
  if (a.count < 1) throw ValidationError("--count must be >= 1");

  std::vector<std::string> names(static_cast<std::size_t>(a.count));
  parallel_for(names.size(), common.jobs, [&](std::size_t k) {
    Config seq_cfg = cfg;
    seq_cfg.sim.seed = cfg.sim.seed + k;
    seq_cfg.degrade.seed = cfg.degrade.seed + k;
    const Scenario scn = generate(seq_cfg.sim);
    const DegradedOutput deg = degrade(scn, seq_cfg.degrade);
    const std::string name = sequence_name_for_seed(seq_cfg.sim.seed);
    const fs::path dir = fs::path(a.out_dir) / name;
    write_pose_file(dir / "gt_poses.csv", scn.gt_poses);
    write_pose_file(dir / "poses.csv", deg.labeled);
    write_pose_file(dir / "poses_anon.csv", deg.anonymous);
    write_mot(dir / "gt.txt", scn.gt_boxes);
    write_mot(dir / "detections.txt", deg.detections);
    write_text_atomic(dir / "occlusion.csv", format_occlusion_csv(scn.occlusion));
    write_text_atomic(dir / "scenario.json", format_config(seq_cfg));
    if (a.render) {
      fs::create_directories(dir / "frames");
      for (int f = 0; f < seq_cfg.sim.frames; ++f) write_png(dir / "frames" / frame_file_name(f), render_frame(scn, f));
    }
    names[k] = name;
  });
  for (const auto& n : names) out << fs::path(a.out_dir) / n << "\n";
}

// ---------------------------------------------------------------------------------------------

struct SelectArgs {
  std::string method = "occlusion";
  std::string boxes;
  std::string frames_dir;
  std::string output;
  int count = SelectConfig{}.count;
  int min_gap = SelectConfig{}.min_gap;
  std::uint64_t seed = SelectConfig{}.seed;
  CLI::Option* o_count = nullptr;
  CLI::Option* o_min_gap = nullptr;
  CLI::Option* o_seed = nullptr;
};

void run_select(const Common& common, const SelectArgs& a, std::ostream& out) {
  Config cfg = load_config(common);
  override_if(a.o_count, a.count, cfg.select.count);
  override_if(a.o_min_gap, a.min_gap, cfg.select.min_gap);
  override_if(a.o_seed, a.seed, cfg.select.seed);
  cfg.validate();

  std::vector<int> picked;
  if (a.method == "occlusion") {
    if (a.boxes.empty()) throw ValidationError("--method occlusion needs --boxes");
    const TrackSet boxes = read_mot(a.boxes);
    const auto scores = occlusion_scores(boxes);
    picked = occlusion_prioritized_select(scores, cfg.select.count, cfg.select.min_gap);
  } else if (a.method == "kmeans") {
    if (a.frames_dir.empty()) throw ValidationError("--method kmeans needs --frames");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(a.frames_dir)) {
      const std::string n = e.path().filename().string();
      if (e.is_regular_file() && n.starts_with("frame_") && e.path().extension() == ".png") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<FrameFeature> features(files.size());
    parallel_for(files.size(), common.jobs, [&](std::size_t i) {
      const std::string stem = files[i].stem().string();
      int index = 0;
      try {
        index = std::stoi(stem.substr(6));
      } catch (const std::exception&) {
        throw ValidationError("cannot parse frame index from " + files[i].string());
      }
      features[i] = extract_feature(read_png(files[i]), index);
    });
    if (features.empty()) throw IoError("no frame_*.png files in " + a.frames_dir);
    picked = kmeans_select(features, cfg.select.count, cfg.select.seed).selected;
  } else {
    throw ValidationError("--method must be 'occlusion' or 'kmeans'");
  }
  const std::string text = format_index_list(picked);
  if (a.output.empty()) {
    out << text;
  } else {
    write_text_atomic(a.output, text);
  }
}

// ---------------------------------------------------------------------------------------------

struct AssignArgs {
  std::string input;
  std::string output;
  std::string corrections;
  std::string diagnostics;
};

void run_assign(const Common& common, const AssignArgs& a, std::ostream&) {
  const auto seqs = enumerate_sequences(a.input);
  parallel_for(seqs.size(), common.jobs, [&](std::size_t i) {
    const PoseFrames anonymous = read_pose_file(seqs[i].path);
    PoseFrames labeled = assign_consistent_ids(anonymous);
    if (!a.corrections.empty()) labeled = apply_corrections(labeled, read_corrections(resolve_companion(a.corrections, seqs[i], seqs.size())));
    write_pose_file(resolve_companion(a.output, seqs[i], seqs.size()), labeled);
    if (!a.diagnostics.empty()) {
      const IdDiagnostics diag = diagnose_ids(labeled);
      std::string text = "frame,player,displacement\n";
      for (const Discontinuity& d : diag.discontinuities)
        text += fmt::format("{},{},{:.3f}\n", d.frame_index, d.player_id, d.displacement);
      write_text_atomic(resolve_companion(a.diagnostics, seqs[i], seqs.size()), text);
    }
  });
}

// ---------------------------------------------------------------------------------------------

struct OverlayArgs {
  std::string frames_dir;
  std::string poses;
  std::string out_dir;
  int size = VmConfig{}.size_px;
  int quantity = VmConfig{}.quantity;
  CLI::Option* o_size = nullptr;
  CLI::Option* o_quantity = nullptr;
};

void run_overlay(const Common& common, const OverlayArgs& a, std::ostream&) {
  Config cfg = load_config(common);
  override_if(a.o_size, a.size, cfg.vm.size_px);
  override_if(a.o_quantity, a.quantity, cfg.vm.quantity);
  cfg.validate();
  const PoseFrames labeled = read_pose_file(a.poses);
  fs::create_directories(a.out_dir);
  parallel_for(labeled.size(), common.jobs, [&](std::size_t i) {
    const PoseFrame& frame = labeled[i];
    const std::string file = frame_file_name(frame.frame_index);
    const Image raw = read_png(fs::path(a.frames_dir) / file);
    const Image vm = render_vm_overlay(raw, make_markers(frame, cfg.vm), cfg.vm.size_px);
    const fs::path target = fs::path(a.out_dir) / file;
    fs::path tmp = target;
    tmp += ".tmp";
    write_png(tmp, vm);
    fs::rename(tmp, target);
  });
}

// ---------------------------------------------------------------------------------------------

struct ConvertArgs {
  std::string input;
  std::string output;
  std::string method = "padding";
  double threshold = 0.0;
  double pad_x = PaddingConfig{}.pad_x_frac;
  double pad_top = PaddingConfig{}.pad_top_frac;
  double pad_bottom = PaddingConfig{}.pad_bottom_frac;
  CLI::Option* o_method = nullptr;
  CLI::Option* o_threshold = nullptr;
  CLI::Option* o_pad_x = nullptr;
  CLI::Option* o_pad_top = nullptr;
  CLI::Option* o_pad_bottom = nullptr;
};

void run_convert(const Common& common, const ConvertArgs& a, std::ostream&) {
  Config cfg = load_config(common);
  if (a.o_method->count() > 0) cfg.convert.method = parse_convert_method(a.method);
  if (a.o_threshold->count() > 0) cfg.convert.threshold_px = a.threshold;
  override_if(a.o_pad_x, a.pad_x, cfg.convert.padding.pad_x_frac);
  override_if(a.o_pad_top, a.pad_top, cfg.convert.padding.pad_top_frac);
  override_if(a.o_pad_bottom, a.pad_bottom, cfg.convert.padding.pad_bottom_frac);
  cfg.validate();
  const auto seqs = enumerate_sequences(a.input);
  parallel_for(seqs.size(), common.jobs, [&](std::size_t i) {
    const TrackSet tracks = convert_sequence(read_pose_file(seqs[i].path), cfg.convert, seqs[i].name);
    write_mot(resolve_companion(a.output, seqs[i], seqs.size()), tracks);
  });
}

// ---------------------------------------------------------------------------------------------

struct TrackArgs {
  std::string input;
  std::string output;
  double iou_min = TrackerConfig{}.iou_min;
  int confirm_hits = TrackerConfig{}.confirm_hits;
  int max_misses = TrackerConfig{}.max_misses;
  CLI::Option* o_iou = nullptr;
  CLI::Option* o_confirm = nullptr;
  CLI::Option* o_misses = nullptr;
};

void run_track(const Common& common, const TrackArgs& a, std::ostream&) {
  Config cfg = load_config(common);
  override_if(a.o_iou, a.iou_min, cfg.tracker.iou_min);
  override_if(a.o_confirm, a.confirm_hits, cfg.tracker.confirm_hits);
  override_if(a.o_misses, a.max_misses, cfg.tracker.max_misses);
  cfg.validate();
  const auto seqs = enumerate_sequences(a.input);
  parallel_for(seqs.size(), common.jobs, [&](std::size_t i) {
    const TrackSet tracks = track(read_mot(seqs[i].path), cfg.tracker);
    write_mot(resolve_companion(a.output, seqs[i], seqs.size()), tracks);
  });
}

// ---------------------------------------------------------------------------------------------

struct EvaluateArgs {
  std::string gt;
  std::vector<std::string> preds;  // evaluate: one path; compare: name=path
  std::string csv;
  std::string table;
  std::string method_name;
  double alpha = EvalConfig{}.alpha_for_counts;
  CLI::Option* o_alpha = nullptr;
};

std::vector<EvalReport> evaluate_all(const Common& common, const Config& cfg, const std::string& gt_arg,
                                     const std::string& pred_arg) {
  const auto seqs = enumerate_sequences(gt_arg);
  std::vector<EvalReport> reports(seqs.size());
  parallel_for(seqs.size(), common.jobs, [&](std::size_t i) {
    TrackSet gt = read_mot(seqs[i].path);
    gt.sequence_name = seqs[i].name;
    const fs::path pred_path = resolve_companion(pred_arg, seqs[i], seqs.size());
    const TrackSet pred = read_mot(pred_path, gt.frame_count);
    reports[i] = compute_hota(gt, pred, {cfg.eval.alpha_for_counts});
    reports[i].sequence = seqs[i].name;
  });
  return reports;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) return;
  if (path == "-") {
    out << text;
  } else {
    write_text_atomic(path, text);
  }
}

void run_evaluate(const Common& common, const EvaluateArgs& a, std::ostream& out) {
  Config cfg = load_config(common);
  override_if(a.o_alpha, a.alpha, cfg.eval.alpha_for_counts);
  cfg.validate();
  if (a.preds.size() != 1) throw ValidationError("evaluate takes exactly one --pred");
  const auto reports = evaluate_all(common, cfg, a.gt, a.preds.front());
  const AggregateReport summary = aggregate(reports, cfg.eval.std_kind);
  emit(a.csv, format_report_csv(reports, summary), out);
  const std::vector<TableRow> rows{{a.method_name, summary}};
  const std::string table = format_table(rows);
  if (a.table.empty()) {
    out << table;
  } else {
    emit(a.table, table, out);
  }
}

void run_compare(const Common& common, const EvaluateArgs& a, std::ostream& out) {
  Config cfg = load_config(common);
  override_if(a.o_alpha, a.alpha, cfg.eval.alpha_for_counts);
  cfg.validate();
  if (a.preds.empty()) throw ValidationError("compare needs at least one --pred name=path");
  std::vector<TableRow> rows;
  for (const std::string& path_arg : a.preds) {
    const auto eq = path_arg.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--pred expects name=path, got '" + path_arg + "'");
    const auto reports = evaluate_all(common, cfg, a.gt, path_arg.substr(eq + 1));
    rows.push_back({path_arg.substr(0, eq), aggregate(reports, cfg.eval.std_kind)});
  }
  emit(a.csv, format_compare_csv(rows), out);
  const std::string table = format_table(rows);
  if (a.table.empty()) {
    out << table;
  } else {
    emit(a.table, table, out);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pose-based virtual-marker multi-object tracking toolkit", "vmtrack"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config_path, "JSON configuration file (command-line flags take precedence)");
  app.add_option("--jobs", common.jobs, "Sequences processed in parallel")->check(CLI::PositiveNumber);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic court scenarios and degraded pose/detector output");
  simulate->add_option("--out", sim.out_dir, "Output root; one subdirectory per sequence")->required();
  simulate->add_option("--count", sim.count, "Number of sequences (seeds seed .. seed+count-1)");
  simulate->add_flag("--render", sim.render, "Also write synthetic frames/frame_%06d.png");
  sim.o_seed = simulate->add_option("--seed", sim.seed, "Scenario seed of the first sequence (sim.seed)");
  sim.o_degrade_seed = simulate->add_option("--degrade-seed", sim.degrade_seed, "Degradation seed of the first sequence (degrade.seed)");
  sim.o_frames = simulate->add_option("--frames", sim.frames, "Frames per sequence (sim.frames)");
  sim.o_players = simulate->add_option("--players", sim.players, "Players on court, at most 6 (sim.players)");
  sim.o_events = simulate->add_option("--events", sim.events, "Random screen events per sequence (sim.random_screen_events)");
  sim.o_arm = simulate->add_option("--arm-extent", sim.arm, "Latent arm reach per side, fraction of body height (sim.arm_extent_frac)");
  sim.o_noise = simulate->add_option("--noise", sim.noise, "Keypoint noise sigma in pixels (degrade.keypoint_noise_px)");
  sim.o_miss = simulate->add_option("--miss-rate", sim.miss, "Keypoint drop probability (degrade.miss_rate)");
  sim.o_det_miss = simulate->add_option("--detector-miss-rate", sim.det_miss, "Detector box drop probability, x4 under occlusion (degrade.detector_miss_rate)");
  sim.o_swap = simulate->add_option("--id-swap-rate", sim.swap, "Per-event probability of a persistent label swap (degrade.id_swap_rate)");

  SelectArgs sel;
  auto* select = app.add_subcommand("select-frames", "Choose frames to annotate");
  select->add_option("--method", sel.method, "occlusion (needs --boxes) or kmeans (needs --frames)")
      ->check(CLI::IsMember({"occlusion", "kmeans"}));
  select->add_option("--boxes", sel.boxes, "MOT file whose boxes define per-frame occlusion");
  select->add_option("--frames", sel.frames_dir, "Directory of frame_%06d.png rasters");
  select->add_option("--output", sel.output, "Index list file (default: stdout)");
  sel.o_count = select->add_option("--count", sel.count, "Frames to select; k for k-means (select.count)");
  sel.o_min_gap = select->add_option("--min-gap", sel.min_gap, "Minimum spacing between occlusion picks (select.min_gap)");
  sel.o_seed = select->add_option("--seed", sel.seed, "k-means seed (select.seed)");

  AssignArgs asg;
  auto* assign = app.add_subcommand("assign-ids", "Label anonymous poses with temporally consistent identities");
  assign->add_option("--input", asg.input, "Anonymous pose CSV (file, directory or {seq} pattern)")->required();
  assign->add_option("--output", asg.output, "Labeled pose CSV (file, directory or {seq} pattern)")->required();
  assign->add_option("--corrections", asg.corrections, "Correction log applied after assignment");
  assign->add_option("--diagnostics", asg.diagnostics, "CSV of identity discontinuities after corrections");

  OverlayArgs ov;
  auto* overlay = app.add_subcommand("overlay", "Render virtual markers onto frames");
  overlay->add_option("--frames", ov.frames_dir, "Directory of raw frame_%06d.png")->required();
  overlay->add_option("--poses", ov.poses, "Labeled pose CSV")->required();
  overlay->add_option("--out", ov.out_dir, "Output directory for marked frames")->required();
  ov.o_size = overlay->add_option("--size", ov.size, "Marker side in pixels (vm.size_px)");
  ov.o_quantity = overlay->add_option("--quantity", ov.quantity, "Markers per player: 1, 3 or 6 (vm.quantity)");

  ConvertArgs cv;
  auto* convert = app.add_subcommand("convert", "Convert labeled poses to MOT boxes");
  convert->add_option("--input", cv.input, "Labeled pose CSV (file, directory or {seq} pattern)")->required();
  convert->add_option("--output", cv.output, "MOT output (file, directory or {seq} pattern)")->required();
  cv.o_method = convert->add_option("--method", cv.method, "padding or maxmin (convert.method)")
                    ->check(CLI::IsMember({"padding", "maxmin"}));
  cv.o_threshold = convert->add_option("--threshold", cv.threshold,
                                       "Switch-filter distance in pixels (convert.threshold_px; default 0.5 x median body height)");
  cv.o_pad_x = convert->add_option("--pad-x", cv.pad_x, "Horizontal pad per side, fraction of body height (convert.pad_x_frac)");
  cv.o_pad_top = convert->add_option("--pad-top", cv.pad_top, "Top pad, fraction of body height (convert.pad_top_frac)");
  cv.o_pad_bottom = convert->add_option("--pad-bottom", cv.pad_bottom, "Bottom pad, fraction of body height (convert.pad_bottom_frac)");

  TrackArgs tr;
  auto* trk = app.add_subcommand("track", "Run the Kalman + Hungarian IoU baseline tracker on detections");
  trk->add_option("--input", tr.input, "MOT detections, id column ignored (file, directory or {seq} pattern)")->required();
  trk->add_option("--output", tr.output, "MOT tracks (file, directory or {seq} pattern)")->required();
  tr.o_iou = trk->add_option("--iou-min", tr.iou_min, "Minimum IoU for association (tracker.iou_min)");
  tr.o_confirm = trk->add_option("--confirm-hits", tr.confirm_hits, "Consecutive hits to confirm a track (tracker.confirm_hits)");
  tr.o_misses = trk->add_option("--max-misses", tr.max_misses, "Consecutive misses before a track dies (tracker.max_misses)");

  EvaluateArgs ev;
  ev.method_name = "tracker";
  auto* evaluate = app.add_subcommand("evaluate", "HOTA / DetA / AssA / LocA / FN / FP / IDs of predictions against ground truth");
  evaluate->add_option("--gt", ev.gt, "Ground-truth MOT (file, directory or {seq} pattern)")->required();
  evaluate->add_option("--pred", ev.preds, "Predicted MOT (file, directory or {seq} pattern)")->required()->expected(1);
  evaluate->add_option("--csv", ev.csv, "Per-sequence CSV report ('-' for stdout)");
  evaluate->add_option("--table", ev.table, "Plain-text summary table (default: stdout)");
  evaluate->add_option("--name", ev.method_name, "Row label in the table");
  ev.o_alpha = evaluate->add_option("--alpha-counts", ev.alpha, "IoU threshold for FN/FP/IDs (eval.alpha_for_counts)");

  EvaluateArgs cmp;
  auto* compare = app.add_subcommand("compare", "Side-by-side table of several predictions against one ground truth");
  compare->add_option("--gt", cmp.gt, "Ground-truth MOT (file, directory or {seq} pattern)")->required();
  compare->add_option("--pred", cmp.preds, "name=path, repeatable")->required();
  compare->add_option("--csv", cmp.csv, "Machine-readable CSV ('-' for stdout)");
  compare->add_option("--table", cmp.table, "Plain-text table (default: stdout)");
  cmp.o_alpha = compare->add_option("--alpha-counts", cmp.alpha, "IoU threshold for FN/FP/IDs (eval.alpha_for_counts)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (simulate->parsed()) run_simulate(common, sim, out);
    if (select->parsed()) run_select(common, sel, out);
    if (assign->parsed()) run_assign(common, asg, out);
    if (overlay->parsed()) run_overlay(common, ov, out);
    if (convert->parsed()) run_convert(common, cv, out);
    if (trk->parsed()) run_track(common, tr, out);
    if (evaluate->parsed()) run_evaluate(common, ev, out);
    if (compare->parsed()) run_compare(common, cmp, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace vmtrack
