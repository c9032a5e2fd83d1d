#include "roughdrop/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "pairs.hpp"
#include "roughdrop/errors.hpp"

namespace roughdrop {

namespace {

int integral_ratio(double num, double den, const char* what) {
  const double r = num / den;
  const double k = std::round(r);
  if (k < 1.0 || std::abs(r - k) > 1e-6 * std::max(1.0, k))
    throw InvalidArgument(std::string(what) + " is not a positive integer multiple of h");
  return static_cast<int>(k);
}

}  // namespace

Coefficients Coefficients::from_cos(double c) {
  return Coefficients{1.0, 1.0 + c, 1.0};
}

void Coefficients::validate() const {
  if (!(sigma_LV > 0.0) || !std::isfinite(sigma_LV)) throw InvalidArgument("sigma_LV must be > 0");
  if (!(sigma_SL > 0.0) || !std::isfinite(sigma_SL)) throw InvalidArgument("sigma_SL must be > 0");
  if (!(sigma_SV > 0.0) || !std::isfinite(sigma_SV)) throw InvalidArgument("sigma_SV must be > 0");
}

void Coefficients::require_nondegenerate() const {
  validate();
  if (!(std::abs(cos_theta_Y()) < 1.0))
    throw InvalidArgument("|cos theta_Y| must be < 1 for this pipeline");
}

const char* to_string(Boundary b) {
  switch (b) {
    case Boundary::Walled: return "walled";
    case Boundary::Free: return "free";
    case Boundary::Periodic: return "periodic";
  }
  return "?";
}

std::shared_ptr<const Domain> Domain::build(const SurfaceSpec& surface, const Extents& extents,
                                            double h, double epsilon, const DomainOptions& options) {
  if (!(h > 0.0) || !(epsilon > 0.0)) throw InvalidArgument("h and epsilon must be positive");
  std::shared_ptr<Domain> d(new Domain());
  d->surface_ = surface;
  d->extents_ = extents;
  d->options_ = options;
  if (!d->options_.stencil)
    d->options_.stencil = std::shared_ptr<const PerimeterStencil>(
        &PerimeterStencil::standard(surface.dim() + 1), [](const PerimeterStencil*) {});
  if (d->options_.stencil->ambient_dim() != surface.dim() + 1)
    throw InvalidArgument("stencil dimension does not match the surface");
  d->h_ = h;
  d->epsilon_ = epsilon;
  d->per_period_ = integral_ratio(epsilon, h, "epsilon");
  d->n_[0] = integral_ratio(extents.hi[0] - extents.lo[0], h, "box width");
  d->n_[1] = surface.dim() == 2 ? integral_ratio(extents.hi[1] - extents.lo[1], h, "box depth") : 1;
  d->n_[2] = integral_ratio(extents.z_hi - extents.z_lo, h, "box height");
  if (extents.z_lo + 0.5 * h > -epsilon * surface.depth() + 1e-12 * h)
    throw InvalidArgument("box too shallow to contain the grooves");
  if (extents.z_hi <= 0.0) throw InvalidArgument("box top must lie above z = 0");
  const std::size_t total = static_cast<std::size_t>(d->n_[0]) * d->n_[1] * d->n_[2];
  if (total > (std::size_t(1) << 31)) throw InvalidArgument("lattice too large");
  d->solid_.assign(total, 0);
  std::size_t count = 0;
  for (int k = 0; k < d->n_[2]; ++k)
    for (int j = 0; j < d->n_[1]; ++j)
      for (int i = 0; i < d->n_[0]; ++i)
        if (d->solid_at(i, j, k)) {
          d->solid_[d->index(i, j, k)] = 1;
          ++count;
        }
  d->solid_count_ = count;
  return d;
}

bool Domain::solid_at(long i, long j, long k) const {
  const double x = extents_.lo[0] + (i + 0.5) * h_;
  const double y = extents_.lo[1] + (j + 0.5) * h_;
  const double z = extents_.z_lo + (k + 0.5) * h_;
  // Snap to the sample grid before the floor so that exact rational
  // positions do not fall on the wrong side through rounding.
  const double scale = surface_.cells_per_period();
  auto to_period = [&](double t) {
    double u = t / epsilon_ * scale;
    double r = std::round(u);
    if (std::abs(u - r) < 1e-9) u = r;
    return u / scale;
  };
  const double phi = surface_.height(to_period(x), surface_.dim() == 2 ? to_period(y) : 0.0);
  return z <= epsilon_ * phi + 1e-12 * h_;
}

double Domain::cell_volume() const { return std::pow(h_, ambient_dim()); }
double Domain::face_area() const { return std::pow(h_, ambient_dim() - 1); }

std::array<int, 3> Domain::coords(std::size_t idx) const {
  const int i = static_cast<int>(idx % n_[0]);
  const std::size_t rest = idx / n_[0];
  const int j = static_cast<int>(rest % n_[1]);
  const int k = static_cast<int>(rest / n_[1]);
  return {i, j, k};
}

std::shared_ptr<const Domain> Domain::subdomain(const Region& r) const {
  for (int a = 0; a < 3; ++a)
    if (r.lo[a] < 0 || r.hi[a] > n_[a] || r.lo[a] >= r.hi[a]) throw InvalidArgument("region exceeds domain");
  std::shared_ptr<Domain> d(new Domain(*this));
  d->extents_.lo[0] = extents_.lo[0] + r.lo[0] * h_;
  d->extents_.hi[0] = extents_.lo[0] + r.hi[0] * h_;
  d->extents_.lo[1] = extents_.lo[1] + r.lo[1] * h_;
  d->extents_.hi[1] = extents_.lo[1] + r.hi[1] * h_;
  d->extents_.z_lo = extents_.z_lo + r.lo[2] * h_;
  d->extents_.z_hi = extents_.z_lo + r.hi[2] * h_;
  d->n_ = {r.hi[0] - r.lo[0], r.hi[1] - r.lo[1], r.hi[2] - r.lo[2]};
  d->solid_.assign(static_cast<std::size_t>(d->n_[0]) * d->n_[1] * d->n_[2], 0);
  std::size_t count = 0;
  for (int k = 0; k < d->n_[2]; ++k)
    for (int j = 0; j < d->n_[1]; ++j)
      for (int i = 0; i < d->n_[0]; ++i) {
        const bool s = solid(index(i + r.lo[0], j + r.lo[1], k + r.lo[2]));
        d->solid_[d->index(i, j, k)] = s;
        count += s;
      }
  d->solid_count_ = count;
  return d;
}

LabelField::LabelField(std::shared_ptr<const Domain> domain, Label fill) : domain_(std::move(domain)) {
  if (fill == Label::Solid) throw InvalidArgument("cannot fill a field with Solid");
  labels_.assign(domain_->cell_count(), static_cast<std::uint8_t>(fill));
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (domain_->solid(i)) labels_[i] = static_cast<std::uint8_t>(Label::Solid);
}

void LabelField::set(std::size_t idx, Label label) {
  if (domain_->solid(idx)) {
    if (label == Label::Solid) return;
    throw InvalidArgument("cannot relabel a solid cell");
  }
  if (label == Label::Solid) throw InvalidArgument("cannot mark a fluid cell solid");
  labels_[idx] = static_cast<std::uint8_t>(label);
}

std::size_t LabelField::liquid_count() const {
  std::size_t c = 0;
  for (auto v : labels_) c += (v == 1);
  return c;
}

EnergyBreakdown energy(const LabelField& field, const Coefficients& coeffs, const Region& region) {
  const Domain& d = field.domain();
  for (int a = 0; a < 3; ++a)
    if (region.lo[a] < 0 || region.hi[a] > d.shape()[a] || region.lo[a] > region.hi[a])
      throw InvalidArgument("region exceeds domain");
  // Accumulate in weight units first; multiply by h^d once at the end.
  double lv = 0.0;
  long long sl = 0, sv = 0;
  const auto& raw = field.raw();
  detail::visit_terms(
      d, region,
      [&](std::size_t p, std::size_t q, double w) {
        if (raw[p] != raw[q]) lv += w;
      },
      [&](std::size_t p, double w) {
        if (raw[p] == 1) lv += w;
      },
      [&](std::size_t p, int faces) {
        if (raw[p] == 1) sl += faces;
        else sv += faces;
      });
  EnergyBreakdown e;
  const double a = d.face_area();
  e.area_LV = lv * a;
  e.area_SL = static_cast<double>(sl) * a;
  e.area_SV = static_cast<double>(sv) * a;
  e.total_E = coeffs.sigma_LV * e.area_LV + coeffs.sigma_SL * e.area_SL + coeffs.sigma_SV * e.area_SV;
  e.total_E_prime = e.area_LV + coeffs.cos_theta_Y() * e.area_SL;
  return e;
}

EnergyBreakdown energy(const LabelField& field, const Coefficients& coeffs) {
  return energy(field, coeffs, field.domain().whole());
}

LabelField replace_region(const LabelField& field, const Region& region, const LabelField& tmpl) {
  const Domain& d = field.domain();
  const Domain& t = tmpl.domain();
  for (int a = 0; a < 3; ++a) {
    if (region.lo[a] < 0 || region.hi[a] > d.shape()[a] || region.lo[a] > region.hi[a])
      throw InvalidArgument("region exceeds domain");
    if (t.shape()[a] != region.hi[a] - region.lo[a])
      throw InvalidArgument("template shape does not match region");
  }
  LabelField out = field;
  for (int k = region.lo[2]; k < region.hi[2]; ++k)
    for (int j = region.lo[1]; j < region.hi[1]; ++j)
      for (int i = region.lo[0]; i < region.hi[0]; ++i) {
        const std::size_t p = d.index(i, j, k);
        const Label v = tmpl.at(i - region.lo[0], j - region.lo[1], k - region.lo[2]);
        if ((v == Label::Solid) != d.solid(p)) throw InvalidArgument("template solid mask mismatch");
        if (v != Label::Solid) out.set(p, v);
      }
  return out;
}

LabelField extract_region(const LabelField& field, const Region& region) {
  auto sub = field.domain().subdomain(region);
  LabelField out(sub);
  for (int k = region.lo[2]; k < region.hi[2]; ++k)
    for (int j = region.lo[1]; j < region.hi[1]; ++j)
      for (int i = region.lo[0]; i < region.hi[0]; ++i) {
        const Label v = field.at(i, j, k);
        if (v != Label::Solid) out.set(i - region.lo[0], j - region.lo[1], k - region.lo[2], v);
      }
  return out;
}

LabelField cassie_baxter_state(std::shared_ptr<const Domain> domain) {
  LabelField f(domain);
  const Domain& d = *domain;
  for (std::size_t p = 0; p < d.cell_count(); ++p) {
    if (d.solid(p)) continue;
    if (d.z_center(d.coords(p)[2]) > 0.0) f.set(p, Label::Liquid);
  }
  return f;
}

LabelField wenzel_state(std::shared_ptr<const Domain> domain) {
  return LabelField(std::move(domain), Label::Liquid);
}

void write_field(std::ostream& out, const LabelField& field) {
  const Domain& d = field.domain();
  const auto old = out.precision(17);
  out << "labelfield v1\n";
  out << "dims " << d.nx() << " " << d.ny() << " " << d.nz() << "\n";
  out << "h " << d.h() << "\nepsilon " << d.epsilon() << "\n";
  out << "origin " << d.extents().lo[0] << " " << d.extents().lo[1] << " " << d.extents().z_lo << "\n";
  out << "data\n";
  for (int k = 0; k < d.nz(); ++k)
    for (int j = 0; j < d.ny(); ++j) {
      for (int i = 0; i < d.nx(); ++i) {
        const Label v = field.at(i, j, k);
        out << (v == Label::Solid ? '#' : v == Label::Liquid ? 'L' : '.');
      }
      out << "\n";
    }
  out.precision(old);
}

LabelField read_field(std::istream& in, std::shared_ptr<const Domain> domain) {
  std::string line, key;
  std::getline(in, line);
  if (line.rfind("labelfield v1", 0) != 0) throw InvalidArgument("not a label field dump");
  int nx = 0, ny = 0, nz = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    ls >> key;
    if (key == "dims") ls >> nx >> ny >> nz;
    if (key == "data") break;
  }
  const Domain& d = *domain;
  if (nx != d.nx() || ny != d.ny() || nz != d.nz()) throw InvalidArgument("dump dims do not match domain");
  LabelField f(domain);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j) {
      if (!std::getline(in, line) || static_cast<int>(line.size()) < nx)
        throw InvalidArgument("truncated label field dump");
      for (int i = 0; i < nx; ++i) {
        const char c = line[i];
        const std::size_t p = d.index(i, j, k);
        if ((c == '#') != d.solid(p)) throw InvalidArgument("dump solid mask mismatch");
        if (c == 'L') f.set(p, Label::Liquid);
      }
    }
  return f;
}

std::string energy_csv_header() { return "region,area_LV,area_SL,area_SV,total_E"; }

std::string energy_csv_row(const std::string& region_id, const EnergyBreakdown& e) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g", region_id.c_str(), e.area_LV, e.area_SL,
                e.area_SV, e.total_E);
  return buf;
}

}  // namespace roughdrop
