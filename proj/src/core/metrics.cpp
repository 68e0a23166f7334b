#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace vf {

namespace {

constexpr double kFlowEps = 1e-3;  // px, below which a flow vector counts as zero

void require_flow_pair(const FlowField& pred, const FlowField& gt, const char* what) {
  require_same_size(pred.width(), pred.height(), gt.width(), gt.height(), what);
}

std::uint64_t gt_valid_count(const FlowField& gt) {
  return static_cast<std::uint64_t>(gt.valid_count());
}

}  // namespace

double image_mse(const ImageRGB& pred, const ImageRGB& gt, const BinaryMask& region) {
  require_same_size(pred.width(), pred.height(), gt.width(), gt.height(), "image_mse: pred vs gt");
  require_same_size(pred.width(), pred.height(), region.width(), region.height(), "image_mse: region");
  double acc = 0.0;
  std::uint64_t n = 0;
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      if (!region.get(x, y)) continue;
      for (int c = 0; c < 3; ++c) {
        const double d = static_cast<double>(pred.at(x, y, c)) - gt.at(x, y, c);
        acc += d * d;
      }
      ++n;
    }
  }
  if (n == 0) fail(Errc::invalid_argument, "image_mse: empty region");
  return acc / (3.0 * n);
}

double psnr(const ImageRGB& pred, const ImageRGB& gt, const BinaryMask& region) {
  const double mse = image_mse(pred, gt, region);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

namespace {

std::vector<double> gaussian_window(int size, double sigma) {
  std::vector<double> w(size);
  const int half = size / 2;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - half;
    w[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Separable weighted filtering restricted to positions where the whole
// window fits ("valid" positions).
std::vector<double> filter_valid(const std::vector<double>& img, int w, int h,
                                 const std::vector<double>& kernel, int& ow, int& oh) {
  const int k = static_cast<int>(kernel.size());
  const int hw = w - k + 1, hh = h;
  std::vector<double> horiz(static_cast<std::size_t>(hw) * hh, 0.0);
  for (int y = 0; y < hh; ++y)
    for (int x = 0; x < hw; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += kernel[i] * img[static_cast<std::size_t>(y) * w + x + i];
      horiz[static_cast<std::size_t>(y) * hw + x] = acc;
    }
  ow = hw;
  oh = h - k + 1;
  std::vector<double> out(static_cast<std::size_t>(ow) * oh, 0.0);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += kernel[i] * horiz[static_cast<std::size_t>(y + i) * hw + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  return out;
}

}  // namespace

double ssim(const ImageRGB& pred, const ImageRGB& gt) {
  require_same_size(pred.width(), pred.height(), gt.width(), gt.height(), "ssim");
  const int w = pred.width(), h = pred.height();
  const int win = 11;
  if (w < win || h < win) fail(Errc::invalid_argument, "ssim: image smaller than the 11x11 window");
  const auto kernel = gaussian_window(win, 1.5);
  const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  const double c2 = (0.03 * 255.0) * (0.03 * 255.0);

  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> a(n), b(n), aa(n), bb(n), ab(n);
  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        a[i] = pred.at(x, y, c);
        b[i] = gt.at(x, y, c);
        aa[i] = a[i] * a[i];
        bb[i] = b[i] * b[i];
        ab[i] = a[i] * b[i];
      }
    int ow = 0, oh = 0;
    const auto mu_a = filter_valid(a, w, h, kernel, ow, oh);
    const auto mu_b = filter_valid(b, w, h, kernel, ow, oh);
    const auto m_aa = filter_valid(aa, w, h, kernel, ow, oh);
    const auto m_bb = filter_valid(bb, w, h, kernel, ow, oh);
    const auto m_ab = filter_valid(ab, w, h, kernel, ow, oh);
    double acc = 0.0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
      const double va = m_aa[i] - mu_a[i] * mu_a[i];
      const double vb = m_bb[i] - mu_b[i] * mu_b[i];
      const double cov = m_ab[i] - mu_a[i] * mu_b[i];
      const double num = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
      const double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2);
      acc += num / den;
    }
    total += acc / static_cast<double>(mu_a.size());
  }
  return total / 3.0;
}

double flow_mse(const FlowField& pred, const FlowField& gt) {
  require_flow_pair(pred, gt, "flow_mse");
  double acc = 0.0;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    if (!gt.valid()[i]) continue;
    const double du = static_cast<double>(pred.u()[i]) - gt.u()[i];
    const double dv = static_cast<double>(pred.v()[i]) - gt.v()[i];
    acc += (du * du + dv * dv) / 2.0;
    ++n;
  }
  if (n == 0) fail(Errc::invalid_argument, "flow_mse: no valid ground-truth pixels");
  return acc / n;
}

double flow_epe(const FlowField& pred, const FlowField& gt) {
  require_flow_pair(pred, gt, "flow_epe");
  double acc = 0.0;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    if (!gt.valid()[i]) continue;
    const double du = static_cast<double>(pred.u()[i]) - gt.u()[i];
    const double dv = static_cast<double>(pred.v()[i]) - gt.v()[i];
    acc += std::sqrt(du * du + dv * dv);
    ++n;
  }
  if (n == 0) fail(Errc::invalid_argument, "flow_epe: no valid ground-truth pixels");
  return acc / n;
}

double delta_threshold(const FlowField& pred, const FlowField& gt, double delta) {
  if (!(delta > 1.0)) fail(Errc::invalid_argument, "delta_threshold: delta must exceed 1");
  require_flow_pair(pred, gt, "delta_threshold");
  std::uint64_t n = 0, correct = 0;
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    if (!gt.valid()[i]) continue;
    ++n;
    const double mp = std::hypot(static_cast<double>(pred.u()[i]), static_cast<double>(pred.v()[i]));
    const double mg = std::hypot(static_cast<double>(gt.u()[i]), static_cast<double>(gt.v()[i]));
    if (mp < kFlowEps && mg < kFlowEps) {
      ++correct;
      continue;
    }
    if (mp <= 0.0 || mg <= 0.0) continue;
    if (std::max(mp / mg, mg / mp) < delta) ++correct;
  }
  if (n == 0) fail(Errc::invalid_argument, "delta_threshold: no valid ground-truth pixels");
  return static_cast<double>(correct) / static_cast<double>(n);
}

double ncc(const FlowField& pred, const FlowField& gt) {
  require_flow_pair(pred, gt, "ncc");
  double sum_a = 0.0, sum_b = 0.0;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    if (!gt.valid()[i]) continue;
    sum_a += pred.u()[i];
    sum_a += pred.v()[i];
    sum_b += gt.u()[i];
    sum_b += gt.v()[i];
    ++n;
  }
  if (n < 2) fail(Errc::invalid_argument, "ncc: needs at least 2 valid ground-truth pixels");
  const double mean_a = sum_a / (2.0 * n), mean_b = sum_b / (2.0 * n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    if (!gt.valid()[i]) continue;
    const double au = pred.u()[i] - mean_a, av = pred.v()[i] - mean_a;
    const double bu = gt.u()[i] - mean_b, bv = gt.v()[i] - mean_b;
    sab += au * bu + av * bv;
    saa += au * au + av * av;
    sbb += bu * bu + bv * bv;
  }
  if (saa == 0.0 || sbb == 0.0) fail(Errc::invalid_argument, "ncc: zero-variance flow samples");
  return sab / std::sqrt(saa * sbb);
}

double flow_cosine(const FlowField& pred, const FlowField& gt) {
  require_flow_pair(pred, gt, "flow_cosine");
  double acc = 0.0;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    if (!gt.valid()[i]) continue;
    const double pu = pred.u()[i], pv = pred.v()[i];
    const double gu = gt.u()[i], gv = gt.v()[i];
    const double mp = std::hypot(pu, pv), mg = std::hypot(gu, gv);
    if (mp < kFlowEps || mg < kFlowEps) continue;
    acc += (pu * gu + pv * gv) / (mp * mg);
    ++n;
  }
  if (n == 0) fail(Errc::invalid_argument, "flow_cosine: no usable pixels");
  return acc / n;
}

double iou(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_size(pred.width(), pred.height(), gt.width(), gt.height(), "iou");
  std::uint64_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < pred.pixel_count(); ++i) {
    const bool a = pred.data()[i] != 0, b = gt.data()[i] != 0;
    inter += (a && b) ? 1 : 0;
    uni += (a || b) ? 1 : 0;
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double combined_loss(const ImageRGB& pred_img, const ImageRGB& gt_img, const BinaryMask& fg,
                     const FlowField& pred_flow, const FlowField& gt_flow, const LossWeights& w) {
  require_same_size(pred_img.width(), pred_img.height(), gt_img.width(), gt_img.height(),
                    "combined_loss: images");
  require_same_size(pred_img.width(), pred_img.height(), fg.width(), fg.height(),
                    "combined_loss: foreground mask");
  require_flow_pair(pred_flow, gt_flow, "combined_loss: flows");
  if (w.eta_y < 0 || w.eta_f < 0) fail(Errc::invalid_argument, "combined_loss: negative weight");

  double image_term = 0.0;
  for (int y = 0; y < pred_img.height(); ++y)
    for (int x = 0; x < pred_img.width(); ++x) {
      if (!fg.get(x, y)) continue;
      for (int c = 0; c < 3; ++c)
        image_term += std::abs(static_cast<double>(pred_img.at(x, y, c)) - gt_img.at(x, y, c));
    }
  double flow_term = 0.0;
  for (std::size_t i = 0; i < gt_flow.pixel_count(); ++i) {
    if (!gt_flow.valid()[i]) continue;
    flow_term += std::abs(static_cast<double>(pred_flow.u()[i]) - gt_flow.u()[i]);
    flow_term += std::abs(static_cast<double>(pred_flow.v()[i]) - gt_flow.v()[i]);
  }
  return w.eta_y * image_term + w.eta_f * flow_term;
}

namespace {

void put(std::ostream& os, const char* key, const std::optional<double>& v) {
  if (!v) return;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", *v);
  os << key << "=" << buf << "\n";
}

}  // namespace

std::string EvalReport::to_text() const {
  std::ostringstream os;
  put(os, "image_mse", image_mse);
  put(os, "ssim", ssim);
  put(os, "image_psnr", image_psnr);
  put(os, "flow_mse", flow_mse);
  put(os, "flow_epe", flow_epe);
  put(os, "delta_1_25", delta_1_25);
  put(os, "ncc", ncc);
  put(os, "flow_cos", flow_cos);
  put(os, "iou", iou);
  os << "image_pixels=" << image_pixels << "\n";
  os << "flow_pixels=" << flow_pixels << "\n";
  os << "mask_pixels=" << mask_pixels << "\n";
  return os.str();
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  const auto set = [&](const char* key, const std::optional<double>& v) {
    if (v)
      j[key] = *v;
    else
      j[key] = nullptr;
  };
  set("image_mse", image_mse);
  set("ssim", ssim);
  set("image_psnr", image_psnr);
  set("flow_mse", flow_mse);
  set("flow_epe", flow_epe);
  set("delta_1_25", delta_1_25);
  set("ncc", ncc);
  set("flow_cos", flow_cos);
  set("iou", iou);
  j["counts"] = {{"image_pixels", image_pixels}, {"flow_pixels", flow_pixels}, {"mask_pixels", mask_pixels}};
  return j.dump(2);
}

EvalReport evaluate(const ImageRGB* pred_img, const ImageRGB* gt_img, const FlowField* pred_flow,
                    const FlowField* gt_flow, const BinaryMask* pred_mask, const BinaryMask* gt_mask,
                    const EvalOptions& opts) {
  EvalReport r;
  if ((pred_img != nullptr) != (gt_img != nullptr))
    fail(Errc::invalid_argument, "evaluate: image inputs must come in pairs");
  if ((pred_flow != nullptr) != (gt_flow != nullptr))
    fail(Errc::invalid_argument, "evaluate: flow inputs must come in pairs");
  if ((pred_mask != nullptr) != (gt_mask != nullptr))
    fail(Errc::invalid_argument, "evaluate: mask inputs must come in pairs");
  if (!pred_img && !pred_flow && !pred_mask)
    fail(Errc::invalid_argument, "evaluate: nothing to evaluate");

  if (pred_img) {
    BinaryMask region(pred_img->width(), pred_img->height(), true);
    if (opts.mse_region == MseRegion::mask_union) {
      if (!pred_mask) fail(Errc::invalid_argument, "evaluate: mask_union region needs masks");
      require_same_size(pred_mask->width(), pred_mask->height(), region.width(), region.height(),
                        "evaluate: masks vs images");
      for (std::size_t i = 0; i < region.pixel_count(); ++i)
        region.data()[i] = (pred_mask->data()[i] || gt_mask->data()[i]) ? 1 : 0;
    }
    r.image_mse = image_mse(*pred_img, *gt_img, region);
    r.image_psnr = psnr(*pred_img, *gt_img, region);
    r.ssim = ssim(*pred_img, *gt_img);
    r.image_pixels = region.count();
  }
  if (pred_flow) {
    r.flow_mse = flow_mse(*pred_flow, *gt_flow);
    r.flow_epe = flow_epe(*pred_flow, *gt_flow);
    r.delta_1_25 = delta_threshold(*pred_flow, *gt_flow, opts.delta);
    r.ncc = ncc(*pred_flow, *gt_flow);
    r.flow_cos = flow_cosine(*pred_flow, *gt_flow);
    r.flow_pixels = gt_valid_count(*gt_flow);
  }
  if (pred_mask) {
    r.iou = iou(*pred_mask, *gt_mask);
    std::uint64_t uni = 0;
    for (std::size_t i = 0; i < pred_mask->pixel_count(); ++i)
      uni += (pred_mask->data()[i] || gt_mask->data()[i]) ? 1 : 0;
    r.mask_pixels = uni;
  }
  return r;
}

EvalReport aggregate_reports(const std::vector<EvalReport>& reports) {
  if (reports.empty()) fail(Errc::invalid_argument, "aggregate_reports: empty input");
  EvalReport out;
  const auto mean_of = [&](std::optional<double> EvalReport::* field) -> std::optional<double> {
    double acc = 0.0;
    std::size_t n = 0;
    for (const auto& r : reports) {
      if (r.*field) {
        acc += *(r.*field);
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return acc / static_cast<double>(n);
  };
  out.image_mse = mean_of(&EvalReport::image_mse);
  out.ssim = mean_of(&EvalReport::ssim);
  out.image_psnr = mean_of(&EvalReport::image_psnr);
  out.flow_mse = mean_of(&EvalReport::flow_mse);
  out.flow_epe = mean_of(&EvalReport::flow_epe);
  out.delta_1_25 = mean_of(&EvalReport::delta_1_25);
  out.ncc = mean_of(&EvalReport::ncc);
  out.flow_cos = mean_of(&EvalReport::flow_cos);
  out.iou = mean_of(&EvalReport::iou);
  for (const auto& r : reports) {
    out.image_pixels += r.image_pixels;
    out.flow_pixels += r.flow_pixels;
    out.mask_pixels += r.mask_pixels;
  }
  return out;
}

}  // namespace vf
