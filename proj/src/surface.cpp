#include "roughdrop/surface.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "roughdrop/errors.hpp"

namespace roughdrop {

namespace {

long wrap(long i, long n) {
  long r = i % n;
  return r < 0 ? r + n : r;
}

std::size_t sample_count(int dim, int cells) {
  return dim == 1 ? static_cast<std::size_t>(cells)
                  : static_cast<std::size_t>(cells) * static_cast<std::size_t>(cells);
}

}  // namespace

const char* to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::Flat: return "flat";
    case SurfaceKind::Pillars: return "pillars";
    case SurfaceKind::SampledHeights: return "sampled";
  }
  return "?";
}

SurfaceSpec SurfaceSpec::flat(int dim) {
  if (dim != 1 && dim != 2) throw InvalidArgument("surface dim must be 1 or 2");
  SurfaceSpec s;
  s.dim_ = dim;
  s.kind_ = SurfaceKind::Flat;
  s.cells_ = 1;
  s.depth_ = 0.0;
  s.heights_ = {0.0};
  return s;
}

SurfaceSpec SurfaceSpec::sampled(int dim, int cells_per_period, double depth,
                                 std::vector<double> heights) {
  SurfaceSpec s;
  s.dim_ = dim;
  s.kind_ = SurfaceKind::SampledHeights;
  s.cells_ = cells_per_period;
  s.depth_ = depth;
  s.heights_ = std::move(heights);
  s.validate();
  return s;
}

SurfaceSpec SurfaceSpec::pillars(int dim, int cells_per_period, double depth, PillarBlock block) {
  if (dim != 1 && dim != 2) throw InvalidArgument("surface dim must be 1 or 2");
  if (cells_per_period < 1) throw InvalidArgument("cells_per_period must be positive");
  if (dim == 1) block.extent_y = 1;
  if (block.extent_x < 1 || block.extent_x > cells_per_period || block.extent_y < 1 ||
      block.extent_y > (dim == 1 ? 1 : cells_per_period)) {
    throw InvalidArgument("pillar block does not fit in the period");
  }
  SurfaceSpec s;
  s.dim_ = dim;
  s.kind_ = SurfaceKind::Pillars;
  s.cells_ = cells_per_period;
  s.depth_ = depth;
  s.block_ = block;
  const int ny = dim == 1 ? 1 : cells_per_period;
  s.heights_.assign(sample_count(dim, cells_per_period), -depth);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < cells_per_period; ++i)
      if (i < block.extent_x && j < block.extent_y)
        s.heights_[static_cast<std::size_t>(j) * cells_per_period + i] = 0.0;
  s.validate();
  return s;
}

void SurfaceSpec::validate() const {
  if (dim_ != 1 && dim_ != 2) throw InvalidArgument("surface dim must be 1 or 2");
  if (cells_ < 1) throw InvalidArgument("cells_per_period must be positive");
  if (!(depth_ >= 0.0) || !std::isfinite(depth_)) throw InvalidArgument("depth M must be >= 0");
  if (heights_.size() != sample_count(dim_, cells_))
    throw InvalidArgument("height table size does not match cells_per_period^d");
  const double tol = 1e-12 * std::max(1.0, depth_);
  bool has_top = false, has_bottom = false;
  for (double v : heights_) {
    if (!std::isfinite(v) || v > tol || v < -depth_ - tol)
      throw InvalidArgument("sampled height outside [-M, 0]");
    if (std::abs(v) <= tol) has_top = true;
    if (std::abs(v + depth_) <= tol) has_bottom = true;
  }
  if (!has_top) throw InvalidArgument("surface must touch the level 0");
  if (depth_ > 0.0 && !has_bottom) throw InvalidArgument("surface must touch the level -M");
}

double SurfaceSpec::sample(long i, long j) const {
  const long n = cells_;
  const long ii = wrap(i, n);
  const long jj = dim_ == 1 ? 0 : wrap(j, n);
  return heights_[static_cast<std::size_t>(jj * n + ii)];
}

double SurfaceSpec::height(double x, double y) const {
  const auto idx = [this](double t) {
    double frac = t - std::floor(t);
    long k = static_cast<long>(std::floor(frac * cells_));
    return std::min<long>(std::max<long>(k, 0), cells_ - 1);
  };
  return sample(idx(x), dim_ == 1 ? 0 : idx(y));
}

bool SurfaceSpec::operator==(const SurfaceSpec& o) const {
  const bool blocks_equal =
      block_.has_value() == o.block_.has_value() &&
      (!block_ || (block_->extent_x == o.block_->extent_x && block_->extent_y == o.block_->extent_y));
  return dim_ == o.dim_ && kind_ == o.kind_ && depth_ == o.depth_ && cells_ == o.cells_ &&
         heights_ == o.heights_ && blocks_equal;
}

SurfaceSpec make_pillar_surface(int dim, double f, double depth, int cells_per_period) {
  if (!(f > 0.0 && f < 1.0)) throw InvalidArgument("pillar fraction f must lie in (0,1)");
  if (!(depth >= 0.0)) throw InvalidArgument("pillar height M must be >= 0");
  if (dim != 1 && dim != 2) throw InvalidArgument("surface dim must be 1 or 2");
  if (cells_per_period < 4) throw InvalidArgument("cells_per_period must be >= 4");
  const double total = dim == 1 ? cells_per_period : double(cells_per_period) * cells_per_period;
  if (f * total < 1.0) throw InvalidArgument("f * cells_per_period^d must be >= 1");

  // Sides stop at n-1 so the grooves stay connected around every pillar.
  const int n = cells_per_period;
  PillarBlock best{1, 1};
  double best_err = 1e300;
  if (dim == 1) {
    for (int a = 1; a <= n - 1; ++a) {
      double err = std::abs(a / total - f);
      if (err < best_err - 1e-15) { best_err = err; best = {a, 1}; }
    }
  } else {
    int best_skew = n;
    for (int a = 1; a <= n - 1; ++a) {
      for (int b = 1; b <= a; ++b) {
        double err = std::abs(a * b / total - f);
        int skew = a - b;
        if (err < best_err - 1e-15 || (std::abs(err - best_err) <= 1e-15 && skew < best_skew)) {
          best_err = err;
          best_skew = skew;
          best = {a, b};
        }
      }
    }
  }
  return SurfaceSpec::pillars(dim, n, depth, best);
}

SurfaceSummary summarize(const SurfaceSpec& s) {
  SurfaceSummary out;
  const int n = s.cells_per_period();
  const long ny = s.dim() == 1 ? 1 : n;
  double jumps = 0.0;
  std::size_t tops = 0;
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < n; ++i) {
      const double v = s.sample(i, j);
      jumps += std::abs(v - s.sample(i + 1, j));
      if (s.dim() == 2) jumps += std::abs(v - s.sample(i, j + 1));
      if (v == 0.0) ++tops;
    }
  }
  // Walls in d=2 have length 1/n per sample edge.
  out.roughness_rho = 1.0 + (s.dim() == 1 ? jumps : jumps / n);
  out.pillar_fraction_f = static_cast<double>(tops) / static_cast<double>(ny * n);
  out.flat_top_area = out.pillar_fraction_f;
  return out;
}

void write_surface(std::ostream& out, const SurfaceSpec& s) {
  const auto old_prec = out.precision(17);
  out << "surface v1\n";
  out << "kind " << to_string(s.kind()) << "\n";
  out << "dim " << s.dim() << "\n";
  out << "depth " << s.depth() << "\n";
  out << "cells_per_period " << s.cells_per_period() << "\n";
  if (s.block()) out << "block " << s.block()->extent_x << " " << s.block()->extent_y << "\n";
  out << "heights\n";
  const int n = s.cells_per_period();
  const int ny = s.dim() == 1 ? 1 : n;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < n; ++i) out << (i ? " " : "") << s.sample(i, j);
    out << "\n";
  }
  out.precision(old_prec);
}

SurfaceSpec read_surface(std::istream& in) {
  std::string line, key;
  std::getline(in, line);
  if (line.rfind("surface v1", 0) != 0) throw InvalidArgument("not a surface file");
  std::string kind;
  int dim = 0, cells = 0;
  double depth = -1.0;
  std::optional<PillarBlock> block;
  std::vector<double> heights;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    if (!(ls >> key)) continue;
    if (key == "kind") ls >> kind;
    else if (key == "dim") ls >> dim;
    else if (key == "depth") ls >> depth;
    else if (key == "cells_per_period") ls >> cells;
    else if (key == "block") { PillarBlock b; ls >> b.extent_x >> b.extent_y; block = b; }
    else if (key == "heights") {
      double v;
      while (in >> v) heights.push_back(v);
      break;
    } else throw InvalidArgument("unknown surface key: " + key);
  }
  if (kind == "flat") return SurfaceSpec::flat(dim);
  if (kind == "pillars") {
    if (!block) throw InvalidArgument("pillars surface lacks a block line");
    SurfaceSpec s = SurfaceSpec::pillars(dim, cells, depth, *block);
    if (s.heights() != heights) throw InvalidArgument("pillar heights do not match block");
    return s;
  }
  if (kind == "sampled") return SurfaceSpec::sampled(dim, cells, depth, std::move(heights));
  throw InvalidArgument("unknown surface kind: " + kind);
}

}  // namespace roughdrop
