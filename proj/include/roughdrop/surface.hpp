#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

namespace roughdrop {

enum class SurfaceKind { Flat, Pillars, SampledHeights };

// Pillar block in sample units: phi = 0 on [0, extent_x) x [0, extent_y).
struct PillarBlock {
  int extent_x = 1;
  int extent_y = 1;
};

// Periodic subgraph surface S = {z <= phi(x)} on the unit torus, sampled on
// a cells_per_period^d grid. max phi = 0, min phi = -depth.
class SurfaceSpec {
 public:
  static SurfaceSpec flat(int dim);
  static SurfaceSpec sampled(int dim, int cells_per_period, double depth,
                             std::vector<double> heights);
  static SurfaceSpec pillars(int dim, int cells_per_period, double depth, PillarBlock block);

  int dim() const { return dim_; }
  SurfaceKind kind() const { return kind_; }
  double depth() const { return depth_; }
  int cells_per_period() const { return cells_; }
  const std::vector<double>& heights() const { return heights_; }
  const std::optional<PillarBlock>& block() const { return block_; }

  // Sample (i, j), wrapped periodically.
  double sample(long i, long j = 0) const;
  // phi at a point given in period units.
  double height(double x, double y = 0.0) const;

  bool operator==(const SurfaceSpec& o) const;

 private:
  SurfaceSpec() = default;
  void validate() const;

  int dim_ = 1;
  SurfaceKind kind_ = SurfaceKind::Flat;
  double depth_ = 0.0;
  int cells_ = 1;
  std::vector<double> heights_{0.0};
  std::optional<PillarBlock> block_;
};

struct SurfaceSummary {
  double roughness_rho = 1.0;
  double pillar_fraction_f = 1.0;
  double flat_top_area = 1.0;
};

// Block of cells_per_period^d samples whose cell fraction is closest to f.
SurfaceSpec make_pillar_surface(int dim, double f, double depth, int cells_per_period);

SurfaceSummary summarize(const SurfaceSpec& surface);

void write_surface(std::ostream& out, const SurfaceSpec& surface);
SurfaceSpec read_surface(std::istream& in);

const char* to_string(SurfaceKind kind);

}  // namespace roughdrop
