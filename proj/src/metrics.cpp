/* Copyright 2026 The yolos Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#include "yolos/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "json.hpp"

#include "yolos/error.hpp"

namespace yolos {
namespace {

constexpr double kSmallArea = 32.0 * 32.0;
constexpr double kLargeArea = 96.0 * 96.0;

std::vector<std::size_t> by_confidence(const std::vector<Detection>& dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].confidence > dets[b].confidence;
  });
  return order;
}

int class_count(const std::vector<EvalImage>& images, std::size_t names) {
  int n = static_cast<int>(names);
  for (const auto& im : images) {
    for (const auto& d : im.detections) n = std::max(n, d.class_id + 1);
    for (const auto& g : im.truths) n = std::max(n, g.class_id + 1);
  }
  return n;
}

// Matching for one threshold with out-of-bucket gts ignored. Appends the
// scored flags of kept detections per class.
void coco_match(const EvalImage& im, double threshold, std::optional<SizeBucket> bucket,
                std::vector<std::vector<ScoredFlag>>& flags) {
  auto outside = [&](const Box& b) { return bucket && size_bucket(b) != *bucket; };
  std::vector<bool> used(im.truths.size(), false);
  for (std::size_t di : by_confidence(im.detections)) {
    const auto& d = im.detections[di];
    int best = -1;
    bool best_ignored = true;
    double best_iou = threshold;
    for (std::size_t gi = 0; gi < im.truths.size(); ++gi) {
      const auto& g = im.truths[gi];
      if (used[gi] || g.class_id != d.class_id) continue;
      const bool ignored = outside(g.box);
      // A real gt always beats an ignored one.
      if (!best_ignored && ignored) continue;
      const double v = iou(d.box, g.box);
      if (v < threshold) continue;
      if (best < 0 || (best_ignored && !ignored) || v > best_iou) {
        best = static_cast<int>(gi);
        best_ignored = ignored;
        best_iou = v;
      }
    }
    if (best >= 0) {
      used[static_cast<std::size_t>(best)] = true;
      if (best_ignored) continue;
      flags[static_cast<std::size_t>(d.class_id)].push_back({d.confidence, true});
    } else if (!outside(d.box)) {
      flags[static_cast<std::size_t>(d.class_id)].push_back({d.confidence, false});
    }
  }
}

std::string percent(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *v * 100.0);
  return buf;
}

const char* mode_name(ApMode m) { return m == ApMode::all_point ? "all_point" : "eleven_point"; }

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> opt_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

const char* to_string(SizeBucket bucket) {
  switch (bucket) {
    case SizeBucket::small: return "small";
    case SizeBucket::medium: return "medium";
    case SizeBucket::large: return "large";
  }
  return "?";
}

SizeBucket size_bucket(const Box& box) {
  const double a = box.area();
  if (a < kSmallArea) return SizeBucket::small;
  if (a < kLargeArea) return SizeBucket::medium;
  return SizeBucket::large;
}

MatchResult match(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                  double iou_threshold) {
  MatchResult r{std::vector<int>(dets.size(), -1), std::vector<bool>(gts.size(), false)};
  for (std::size_t di : by_confidence(dets)) {
    int best = -1;
    double best_iou = -1;
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (r.gt_matched[gi] || gts[gi].class_id != dets[di].class_id) continue;
      const double v = iou(dets[di].box, gts[gi].box);
      if (v > best_iou) {
        best_iou = v;
        best = static_cast<int>(gi);
      }
    }
    if (best >= 0 && best_iou >= iou_threshold) {
      r.det_to_gt[di] = best;
      r.gt_matched[static_cast<std::size_t>(best)] = true;
    }
  }
  return r;
}

double average_precision(std::vector<ScoredFlag> flags, int positives, ApMode mode) {
  if (positives < 1) fail(ErrorKind::invalid_argument, "average precision needs at least one positive");
  std::stable_sort(flags.begin(), flags.end(),
                   [](const ScoredFlag& a, const ScoredFlag& b) { return a.confidence > b.confidence; });
  const std::size_t n = flags.size();
  std::vector<double> recall(n), precision(n);
  long tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (flags[i].tp) ++tp;
    recall[i] = static_cast<double>(tp) / positives;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  for (std::size_t i = n; i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);
  if (mode == ApMode::eleven_point) {
    double sum = 0;
    for (int t = 0; t <= 10; ++t) {
      const double r = t / 10.0;
      auto it = std::find_if(recall.begin(), recall.end(), [&](double x) { return x >= r; });
      if (it != recall.end()) sum += precision[static_cast<std::size_t>(it - recall.begin())];
    }
    return sum / 11.0;
  }
  double ap = 0;
  double prev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ap += (recall[i] - prev) * precision[i];
    prev = recall[i];
  }
  return ap;
}

Aggregate aggregate(const std::vector<double>& aps, const std::vector<double>& supports) {
  if (aps.empty()) fail(ErrorKind::invalid_argument, "aggregate over an empty class set");
  if (aps.size() != supports.size())
    fail(ErrorKind::invalid_argument, "aggregate: " + std::to_string(aps.size()) + " APs but " +
                                          std::to_string(supports.size()) + " supports");
  double sum = 0, weighted = 0, total = 0;
  for (std::size_t i = 0; i < aps.size(); ++i) {
    if (!(supports[i] > 0)) fail(ErrorKind::invalid_argument, "aggregate: support must be positive");
    sum += aps[i];
    weighted += supports[i] * aps[i];
    total += supports[i];
  }
  return {sum / static_cast<double>(aps.size()), weighted / total};
}

double f1_score(double recall, double precision) {
  const double s = recall + precision;
  return s > 0 ? 2 * recall * precision / s : 0.0;
}

MicroMetrics micro_metrics(long tp, long fp, long positives) {
  if (positives < 1) fail(ErrorKind::invalid_argument, "micro metrics need at least one positive");
  if (tp < 0 || fp < 0 || tp > positives)
    fail(ErrorKind::invalid_argument, "micro metrics: counts out of range");
  MicroMetrics m;
  m.recall = static_cast<double>(tp) / static_cast<double>(positives);
  if (tp + fp > 0) {
    m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    m.f1 = f1_score(*m.recall, *m.precision);
  }
  return m;
}

std::optional<double> coco_ap(const std::vector<EvalImage>& images, std::optional<SizeBucket> bucket,
                              ApMode mode) {
  const int classes = class_count(images, 0);
  std::vector<int> positives(static_cast<std::size_t>(classes), 0);
  for (const auto& im : images)
    for (const auto& g : im.truths)
      if (!bucket || size_bucket(g.box) == *bucket) ++positives[static_cast<std::size_t>(g.class_id)];
  if (std::all_of(positives.begin(), positives.end(), [](int p) { return p == 0; })) return std::nullopt;
  double total = 0;
  for (int step = 10; step < 20; ++step) {
    const double threshold = step / 20.0;
    std::vector<std::vector<ScoredFlag>> flags(static_cast<std::size_t>(classes));
    for (const auto& im : images) coco_match(im, threshold, bucket, flags);
    double sum = 0;
    int counted = 0;
    for (int c = 0; c < classes; ++c) {
      const int p = positives[static_cast<std::size_t>(c)];
      if (p == 0) continue;
      sum += average_precision(flags[static_cast<std::size_t>(c)], p, mode);
      ++counted;
    }
    total += sum / counted;
  }
  return total / 10.0;
}

EvalReport evaluate(const std::vector<EvalImage>& images, const EvalOptions& options) {
  for (double t : {options.iou_threshold, options.conf_threshold})
    if (!(t >= 0 && t <= 1)) fail(ErrorKind::invalid_argument, "evaluation thresholds must lie in [0, 1]");
  EvalReport rep;
  rep.options = options;
  const int classes = class_count(images, options.class_names.size());
  std::vector<std::vector<ScoredFlag>> flags(static_cast<std::size_t>(classes));
  rep.classes.resize(static_cast<std::size_t>(classes));
  for (int c = 0; c < classes; ++c) {
    auto& cr = rep.classes[static_cast<std::size_t>(c)];
    cr.class_id = c;
    cr.name = static_cast<std::size_t>(c) < options.class_names.size()
                  ? options.class_names[static_cast<std::size_t>(c)]
                  : "class " + std::to_string(c);
  }
  std::vector<ScoredFlag> pooled;
  for (const auto& im : images) {
    for (const auto& g : im.truths) ++rep.classes[static_cast<std::size_t>(g.class_id)].support;
    const MatchResult m = match(im.detections, im.truths, options.iou_threshold);
    for (std::size_t i = 0; i < im.detections.size(); ++i) {
      const auto& d = im.detections[i];
      const ScoredFlag f{d.confidence, m.is_tp(i)};
      flags[static_cast<std::size_t>(d.class_id)].push_back(f);
      pooled.push_back(f);
      if (d.confidence >= options.conf_threshold) {
        auto& cr = rep.classes[static_cast<std::size_t>(d.class_id)];
        (f.tp ? cr.tp : cr.fp) += 1;
      }
    }
  }
  std::vector<double> aps, supports;
  for (auto& cr : rep.classes) {
    rep.positives += cr.support;
    rep.tp += cr.tp;
    rep.fp += cr.fp;
    if (cr.support == 0) continue;
    cr.ap = average_precision(flags[static_cast<std::size_t>(cr.class_id)], static_cast<int>(cr.support),
                              options.ap_mode);
    aps.push_back(*cr.ap);
    supports.push_back(static_cast<double>(cr.support));
  }
  if (!aps.empty()) {
    const Aggregate agg = aggregate(aps, supports);
    rep.map = agg.map;
    rep.wap = agg.wap;
    rep.micro = micro_metrics(rep.tp, rep.fp, rep.positives);
  }
  rep.ap_coco = coco_ap(images, std::nullopt, options.ap_mode);
  rep.ap_small = coco_ap(images, SizeBucket::small, options.ap_mode);
  rep.ap_medium = coco_ap(images, SizeBucket::medium, options.ap_mode);
  rep.ap_large = coco_ap(images, SizeBucket::large, options.ap_mode);

  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const ScoredFlag& a, const ScoredFlag& b) { return a.confidence > b.confidence; });
  long tp = 0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    if (pooled[i].tp) ++tp;
    rep.pr_curve.push_back({pooled[i].confidence,
                            rep.positives ? static_cast<double>(tp) / static_cast<double>(rep.positives) : 0.0,
                            static_cast<double>(tp) / static_cast<double>(i + 1)});
  }
  return rep;
}

std::string report_to_json(const EvalReport& r) {
  using nlohmann::json;
  json classes = json::array();
  for (const auto& c : r.classes)
    classes.push_back({{"class_id", c.class_id},
                       {"name", c.name},
                       {"support", c.support},
                       {"ap", opt(c.ap)},
                       {"tp", c.tp},
                       {"fp", c.fp}});
  json curve = json::array();
  for (const auto& p : r.pr_curve) curve.push_back({p.confidence, p.recall, p.precision});
  json j = {{"iou_threshold", r.options.iou_threshold},
            {"conf_threshold", r.options.conf_threshold},
            {"ap_mode", mode_name(r.options.ap_mode)},
            {"classes", classes},
            {"map", opt(r.map)},
            {"wap", opt(r.wap)},
            {"ap_coco", opt(r.ap_coco)},
            {"ap_small", opt(r.ap_small)},
            {"ap_medium", opt(r.ap_medium)},
            {"ap_large", opt(r.ap_large)},
            {"micro",
             {{"tp", r.tp},
              {"fp", r.fp},
              {"positives", r.positives},
              {"recall", opt(r.micro.recall)},
              {"precision", opt(r.micro.precision)},
              {"f1", opt(r.micro.f1)}}},
            {"pr_curve", curve}};
  return j.dump(2) + "\n";
}

EvalReport report_from_json(std::string_view text) {
  using nlohmann::json;
  EvalReport r;
  try {
    const json j = json::parse(text);
    r.options.iou_threshold = j.at("iou_threshold").get<double>();
    r.options.conf_threshold = j.at("conf_threshold").get<double>();
    const auto mode = j.at("ap_mode").get<std::string>();
    if (mode == "all_point") r.options.ap_mode = ApMode::all_point;
    else if (mode == "eleven_point") r.options.ap_mode = ApMode::eleven_point;
    else fail(ErrorKind::parse, "eval report: unknown ap_mode '" + mode + "'");
    for (const auto& c : j.at("classes")) {
      ClassResult cr;
      cr.class_id = c.at("class_id").get<int>();
      cr.name = c.at("name").get<std::string>();
      cr.support = c.at("support").get<long>();
      cr.ap = opt_from(c.at("ap"));
      cr.tp = c.at("tp").get<long>();
      cr.fp = c.at("fp").get<long>();
      r.options.class_names.push_back(cr.name);
      r.classes.push_back(cr);
    }
    r.map = opt_from(j.at("map"));
    r.wap = opt_from(j.at("wap"));
    r.ap_coco = opt_from(j.at("ap_coco"));
    r.ap_small = opt_from(j.at("ap_small"));
    r.ap_medium = opt_from(j.at("ap_medium"));
    r.ap_large = opt_from(j.at("ap_large"));
    const auto& m = j.at("micro");
    r.tp = m.at("tp").get<long>();
    r.fp = m.at("fp").get<long>();
    r.positives = m.at("positives").get<long>();
    r.micro = {opt_from(m.at("recall")), opt_from(m.at("precision")), opt_from(m.at("f1"))};
    for (const auto& p : j.at("pr_curve"))
      r.pr_curve.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("eval report: ") + e.what());
  }
  return r;
}

std::string report_to_table(const EvalReport& r) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& c : r.classes) rows.emplace_back(c.name + " [%]", percent(c.ap));
  rows.emplace_back("mAP [%]", percent(r.map));
  rows.emplace_back("wAP [%]", percent(r.wap));
  rows.emplace_back("AP_S [%]", percent(r.ap_small));
  rows.emplace_back("AP_M [%]", percent(r.ap_medium));
  rows.emplace_back("AP_L [%]", percent(r.ap_large));
  rows.emplace_back("REC_ma [%]", percent(r.micro.recall));
  rows.emplace_back("PREC_ma [%]", percent(r.micro.precision));
  rows.emplace_back("F1_ma [%]", percent(r.micro.f1));
  std::size_t left = 6, right = 5;
  for (const auto& [k, v] : rows) {
    left = std::max(left, k.size());
    right = std::max(right, v.size());
  }
  auto line = [&](const std::string& k, const std::string& v) {
    return k + std::string(left - k.size() + 2, ' ') + std::string(right - v.size(), ' ') + v + "\n";
  };
  std::string out = line("Metric", "Value");
  out += std::string(left + 2 + right, '-') + "\n";
  for (const auto& [k, v] : rows) out += line(k, v);
  return out;
}

}  // namespace yolos
