#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "roughdrop/stencil.hpp"
#include "roughdrop/surface.hpp"

namespace roughdrop {

struct Coefficients {
  double sigma_LV = 1.0;
  double sigma_SL = 1.0;
  double sigma_SV = 1.0;

  // Sign convention: cos theta_Y >= 0 is hydrophobic.
  double cos_theta_Y() const { return (sigma_SL - sigma_SV) / sigma_LV; }
  // sigma_LV = 1, sigma_SV = 1, sigma_SL = 1 + c.
  static Coefficients from_cos(double cos_theta);
  void validate() const;
  // Also demands |cos theta_Y| < 1.
  void require_nondegenerate() const;
};

enum class Boundary { Walled, Free, Periodic };
enum class Lid { Open, Walled };

const char* to_string(Boundary b);

// Box in macroscopic units. lo/hi[1] are ignored for d = 1.
struct Extents {
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};
  double z_lo = -1.0;
  double z_hi = 1.0;
};

struct DomainOptions {
  std::array<Boundary, 2> lateral{Boundary::Walled, Boundary::Walled};
  Lid lid = Lid::Walled;
  std::shared_ptr<const PerimeterStencil> stencil;  // null selects the standard one
};

// Half-open cell index box [lo, hi).
struct Region {
  std::array<int, 3> lo{0, 0, 0};
  std::array<int, 3> hi{0, 0, 0};
  bool contains(int i, int j, int k) const {
    return i >= lo[0] && i < hi[0] && j >= lo[1] && j < hi[1] && k >= lo[2] && k < hi[2];
  }
};

class Domain {
 public:
  static std::shared_ptr<const Domain> build(const SurfaceSpec& surface, const Extents& extents,
                                             double h, double epsilon, const DomainOptions& options = {});

  int ambient_dim() const { return surface_.dim() + 1; }
  int nx() const { return n_[0]; }
  int ny() const { return n_[1]; }
  int nz() const { return n_[2]; }
  const std::array<int, 3>& shape() const { return n_; }
  std::size_t cell_count() const { return solid_.size(); }
  double h() const { return h_; }
  double epsilon() const { return epsilon_; }
  int cells_per_period() const { return per_period_; }
  double cell_volume() const;
  double face_area() const;  // h^d
  const SurfaceSpec& surface() const { return surface_; }
  const Extents& extents() const { return extents_; }
  const DomainOptions& options() const { return options_; }
  const PerimeterStencil& stencil() const { return *options_.stencil; }
  Region whole() const { return Region{{0, 0, 0}, n_}; }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * n_[1] + j) * n_[0] + i;
  }
  std::array<int, 3> coords(std::size_t idx) const;
  double x_center(int i) const { return extents_.lo[0] + (i + 0.5) * h_; }
  double y_center(int j) const { return extents_.lo[1] + (j + 0.5) * h_; }
  double z_center(int k) const { return extents_.z_lo + (k + 0.5) * h_; }

  bool solid(std::size_t idx) const { return solid_[idx] != 0; }
  // Cell-center mask test for any integer cell, inside the box or not.
  bool solid_at(long i, long j, long k) const;
  std::size_t solid_count() const { return solid_count_; }
  std::size_t free_count() const { return solid_.size() - solid_count_; }

  // Same surface and spacing restricted to a cell box.
  std::shared_ptr<const Domain> subdomain(const Region& region) const;

 private:
  Domain() = default;

  SurfaceSpec surface_ = SurfaceSpec::flat(1);
  Extents extents_;
  DomainOptions options_;
  double h_ = 1.0;
  double epsilon_ = 1.0;
  int per_period_ = 1;
  std::array<int, 3> n_{1, 1, 1};
  std::vector<std::uint8_t> solid_;
  std::size_t solid_count_ = 0;
};

enum class Label : std::uint8_t { Vapor = 0, Liquid = 1, Solid = 2 };

class LabelField {
 public:
  explicit LabelField(std::shared_ptr<const Domain> domain, Label fill = Label::Vapor);

  const Domain& domain() const { return *domain_; }
  const std::shared_ptr<const Domain>& domain_ptr() const { return domain_; }
  Label at(std::size_t idx) const { return static_cast<Label>(labels_[idx]); }
  Label at(int i, int j, int k) const { return at(domain_->index(i, j, k)); }
  bool liquid(std::size_t idx) const { return labels_[idx] == 1; }
  void set(std::size_t idx, Label label);
  void set(int i, int j, int k, Label label) { set(domain_->index(i, j, k), label); }

  std::size_t liquid_count() const;
  double volume() const { return static_cast<double>(liquid_count()) * domain_->cell_volume(); }
  const std::vector<std::uint8_t>& raw() const { return labels_; }

  bool operator==(const LabelField& o) const { return labels_ == o.labels_; }
  bool operator!=(const LabelField& o) const { return !(*this == o); }

 private:
  std::shared_ptr<const Domain> domain_;
  std::vector<std::uint8_t> labels_;
};

struct EnergyBreakdown {
  double area_LV = 0.0;
  double area_SL = 0.0;
  double area_SV = 0.0;
  double total_E = 0.0;
  double total_E_prime = 0.0;
};

// Face-weighted sums over pairs owned by cells in region. Owner rule: a pair
// (p, p + e) with e in the canonical half stencil belongs to p; a solid face
// and any pair leaving the box belong to the fluid cell inside the region.
EnergyBreakdown energy(const LabelField& field, const Coefficients& coeffs, const Region& region);
EnergyBreakdown energy(const LabelField& field, const Coefficients& coeffs);

// Copy of field with region overwritten by tmpl, which lives on a domain of
// the region's shape with an identical solid mask.
LabelField replace_region(const LabelField& field, const Region& region, const LabelField& tmpl);
LabelField extract_region(const LabelField& field, const Region& region);

// Liquid = {z >= 0} (centers above 0) and Liquid = complement of the solid.
LabelField cassie_baxter_state(std::shared_ptr<const Domain> domain);
LabelField wenzel_state(std::shared_ptr<const Domain> domain);

void write_field(std::ostream& out, const LabelField& field);
LabelField read_field(std::istream& in, std::shared_ptr<const Domain> domain);

std::string energy_csv_header();
std::string energy_csv_row(const std::string& region_id, const EnergyBreakdown& e);

}  // namespace roughdrop
