#pragma once

// Modal analysis of tubular monopile/tower structures: tapered Timoshenko
// beam elements in a single bending plane, a lumped translational top mass,
// Winkler lateral springs over the embedded length, seawater added mass over
// the submerged length, and scour modelled by removing springs below the
// original mudline.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pileshm/common.hpp"

namespace pileshm {

struct BeamSegment {
  double length = 0.0;                   // m
  double outer_diameter_base = 0.0;      // m
  double outer_diameter_top = 0.0;       // m
  double wall_thickness_base = 0.0;      // m
  double wall_thickness_top = 0.0;       // m
  double density = 0.0;                  // kg/m^3
  double youngs_modulus = 0.0;           // Pa
  double poisson_ratio = 0.3;
  double shear_correction_factor = 0.53; // thin-walled circular tube

  void validate() const {
    if (!(length > 0.0)) throw std::invalid_argument("BeamSegment: length must be positive");
    for (auto [od, t] : {std::pair{outer_diameter_base, wall_thickness_base},
                         std::pair{outer_diameter_top, wall_thickness_top}}) {
      if (!(t > 0.0)) throw std::invalid_argument("BeamSegment: wall thickness must be positive");
      if (od < 2.0 * t)  // od == 2t is a solid section
        throw std::invalid_argument("BeamSegment: outer diameter must be at least twice the wall thickness");
    }
    if (!(density > 0.0) || !(youngs_modulus > 0.0))
      throw std::invalid_argument("BeamSegment: density and Young's modulus must be positive");
    if (!(poisson_ratio > -1.0 && poisson_ratio < 0.5))
      throw std::invalid_argument("BeamSegment: Poisson ratio out of range");
    if (!(shear_correction_factor > 0.0 && shear_correction_factor <= 1.0))
      throw std::invalid_argument("BeamSegment: shear correction factor must be in (0,1]");
  }
};

struct StructureTemplate {
  std::vector<BeamSegment> segments;  // contiguous from base (z = 0) to tip
  double top_mass = 0.0;              // kg, lumped at the free end
  double embedded_length = 0.0;       // m
  double submerged_length = 0.0;      // m

  double total_length() const {
    double sum = 0.0;
    for (const auto& s : segments) sum += s.length;
    return sum;
  }

  void validate() const {
    if (segments.empty()) throw std::invalid_argument("StructureTemplate: no segments");
    for (const auto& s : segments) s.validate();
    if (top_mass < 0.0) throw std::invalid_argument("StructureTemplate: negative top mass");
    if (embedded_length < 0.0 || submerged_length < 0.0)
      throw std::invalid_argument("StructureTemplate: negative embedded or submerged length");
    if (!(total_length() > embedded_length + submerged_length))
      throw std::invalid_argument("StructureTemplate: total length must exceed embedded + submerged length");
  }
};

struct FoundationModel {
  double stiffness_per_length = 0.0;  // N/m^2, uniform over the embedded depth
  double scour_depth = 0.0;           // m, measured down from the mudline

  void validate(double embedded_length) const {
    if (stiffness_per_length < 0.0) throw std::invalid_argument("FoundationModel: negative stiffness");
    if (scour_depth < 0.0) throw std::invalid_argument("FoundationModel: negative scour depth");
    if (embedded_length > 0.0 && scour_depth >= embedded_length)
      throw std::invalid_argument("FoundationModel: scour depth must be less than the embedded length");
  }
};

enum class BaseCondition { pinned, clamped };
enum class ScourMode { remove_springs, rescale_remaining };
enum class AddedMassArea { material, enclosed };

struct BuildOptions {
  int n_elements = 100;
  double seawater_density = 1030.0;  // kg/m^3
  BaseCondition base = BaseCondition::pinned;
  // Fix the lateral DOF of every embedded node (laterally rigid soil, the
  // no-SSI validation convention); rotations stay elastic through the pile.
  bool rigid_embedment = false;
  ScourMode scour_mode = ScourMode::remove_springs;
  // material: added mass = rho_w * material annulus area, which reproduces
  // the effective submerged density of the reference model (7850 + 1030 =
  // 8880 kg/m^3); enclosed: displaced volume of the full outer circle.
  AddedMassArea added_mass_area = AddedMassArea::material;
};

struct AssembledSystem {
  Eigen::MatrixXd stiffness;   // full symmetric K, 2 DOF per node (lateral, rotation)
  Eigen::MatrixXd mass;        // full symmetric M
  std::vector<double> node_z;  // node elevations from the base
  std::vector<int> free_dofs;  // ascending global DOF indices kept in the solve

  static int lateral_dof(int node) { return 2 * node; }
  static int rotation_dof(int node) { return 2 * node + 1; }

  Eigen::MatrixXd reduced(const Eigen::MatrixXd& full) const {
    const auto n = static_cast<Eigen::Index>(free_dofs.size());
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) out(i, j) = full(free_dofs[static_cast<std::size_t>(i)], free_dofs[static_cast<std::size_t>(j)]);
    return out;
  }
};

struct ModalResult {
  std::vector<double> frequencies_hz;  // ascending, strictly positive
  Eigen::MatrixXd mode_shapes;         // free DOFs x modes, mass-normalized
};

namespace detail {

struct Section {
  double area;       // m^2
  double inertia;    // m^4
  double density;
  double youngs;
  double shear_mod;
  double kappa;
};

inline Section section_at(const StructureTemplate& tpl, double z) {
  double z0 = 0.0;
  for (const auto& seg : tpl.segments) {
    if (z <= z0 + seg.length || &seg == &tpl.segments.back()) {
      double zeta = std::clamp((z - z0) / seg.length, 0.0, 1.0);
      double od = seg.outer_diameter_base + zeta * (seg.outer_diameter_top - seg.outer_diameter_base);
      double t = seg.wall_thickness_base + zeta * (seg.wall_thickness_top - seg.wall_thickness_base);
      double id = od - 2.0 * t;
      if (!(od > 0.0 && id >= 0.0 && od > id))
        throw std::invalid_argument("StructureTemplate: degenerate section encountered");
      Section s;
      s.area = pi / 4.0 * (od * od - id * id);
      s.inertia = pi / 64.0 * (od * od * od * od - id * id * id * id);
      s.density = seg.density;
      s.youngs = seg.youngs_modulus;
      s.shear_mod = seg.youngs_modulus / (2.0 * (1.0 + seg.poisson_ratio));
      s.kappa = seg.shear_correction_factor;
      return s;
    }
    z0 += seg.length;
  }
  throw std::logic_error("section_at: unreachable");
}

// Timoshenko element stiffness, DOFs [w1, theta1, w2, theta2].
inline Eigen::Matrix4d element_stiffness(double EI, double phi, double L) {
  const double c = EI / ((1.0 + phi) * L * L * L);
  Eigen::Matrix4d k;
  k << 12.0, 6.0 * L, -12.0, 6.0 * L,
      6.0 * L, (4.0 + phi) * L * L, -6.0 * L, (2.0 - phi) * L * L,
      -12.0, -6.0 * L, 12.0, -6.0 * L,
      6.0 * L, (2.0 - phi) * L * L, -6.0 * L, (4.0 + phi) * L * L;
  return c * k;
}

// Consistent translational mass for a Timoshenko element; rhoA may include
// entrained-water added mass.
inline Eigen::Matrix4d element_mass_translational(double rhoA, double phi, double L) {
  const double c = rhoA * L / ((1.0 + phi) * (1.0 + phi));
  const double m1 = 13.0 / 35.0 + 7.0 * phi / 10.0 + phi * phi / 3.0;
  const double m2 = 11.0 / 210.0 + 11.0 * phi / 120.0 + phi * phi / 24.0;
  const double m3 = 9.0 / 70.0 + 3.0 * phi / 10.0 + phi * phi / 6.0;
  const double m4 = 13.0 / 420.0 + 3.0 * phi / 40.0 + phi * phi / 24.0;
  const double m5 = 1.0 / 105.0 + phi / 60.0 + phi * phi / 120.0;
  const double m6 = 1.0 / 140.0 + phi / 60.0 + phi * phi / 120.0;
  Eigen::Matrix4d m;
  m << m1, m2 * L, m3, -m4 * L,
      m2 * L, m5 * L * L, m4 * L, -m6 * L * L,
      m3, m4 * L, m1, -m2 * L,
      -m4 * L, -m6 * L * L, -m2 * L, m5 * L * L;
  return c * m;
}

inline Eigen::Matrix4d element_mass_rotary(double rhoI, double phi, double L) {
  const double c = rhoI / ((1.0 + phi) * (1.0 + phi) * L);
  const double r1 = 6.0 / 5.0;
  const double r2 = 1.0 / 10.0 - phi / 2.0;
  const double r3 = 2.0 / 15.0 + phi / 6.0 + phi * phi / 3.0;
  const double r4 = 1.0 / 30.0 + phi / 6.0 - phi * phi / 6.0;
  Eigen::Matrix4d m;
  m << r1, r2 * L, -r1, r2 * L,
      r2 * L, r3 * L * L, -r2 * L, -r4 * L * L,
      -r1, -r2 * L, r1, -r2 * L,
      r2 * L, -r4 * L * L, -r2 * L, r3 * L * L;
  return c * m;
}

// Node layout with exact nodes at segment boundaries and at the scour line,
// mudline and waterline so that spring and added-mass regions are resolved.
inline std::vector<double> make_mesh(const StructureTemplate& tpl, const FoundationModel& fnd, int n_elements) {
  const double total = tpl.total_length();
  std::vector<double> breaks{0.0, total};
  double z0 = 0.0;
  for (const auto& seg : tpl.segments) {
    z0 += seg.length;
    breaks.push_back(z0);
  }
  if (tpl.embedded_length > 0.0) {
    breaks.push_back(tpl.embedded_length);
    if (fnd.scour_depth > 0.0) breaks.push_back(tpl.embedded_length - fnd.scour_depth);
  }
  if (tpl.submerged_length > 0.0) breaks.push_back(tpl.embedded_length + tpl.submerged_length);
  std::sort(breaks.begin(), breaks.end());
  const double tol = 1e-9 * total;
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [tol](double a, double b) { return std::abs(a - b) < tol; }),
               breaks.end());

  std::vector<double> nodes{0.0};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double len = breaks[i + 1] - breaks[i];
    const int n = std::max(1, static_cast<int>(std::lround(n_elements * len / total)));
    for (int e = 1; e <= n; ++e) nodes.push_back(breaks[i] + len * e / n);
  }
  return nodes;
}

}  // namespace detail

inline AssembledSystem build_system(const StructureTemplate& tpl, const FoundationModel& fnd,
                                    const BuildOptions& opt = {}) {
  tpl.validate();
  fnd.validate(tpl.embedded_length);
  if (opt.n_elements < 10) throw std::invalid_argument("build_system: n_elements must be at least 10");
  if (opt.seawater_density < 0.0) throw std::invalid_argument("build_system: negative seawater density");

  AssembledSystem sys;
  sys.node_z = detail::make_mesh(tpl, fnd, opt.n_elements);
  const int n_nodes = static_cast<int>(sys.node_z.size());
  const int n_dof = 2 * n_nodes;
  sys.stiffness = Eigen::MatrixXd::Zero(n_dof, n_dof);
  sys.mass = Eigen::MatrixXd::Zero(n_dof, n_dof);

  const double z_water_top = tpl.embedded_length + tpl.submerged_length;

  for (int e = 0; e + 1 < n_nodes; ++e) {
    const double za = sys.node_z[static_cast<std::size_t>(e)];
    const double zb = sys.node_z[static_cast<std::size_t>(e) + 1];
    const double L = zb - za;
    const double zm = 0.5 * (za + zb);
    const auto sec = detail::section_at(tpl, zm);

    const double EI = sec.youngs * sec.inertia;
    const double phi = 12.0 * EI / (sec.kappa * sec.shear_mod * sec.area * L * L);

    double rhoA = sec.density * sec.area;
    if (tpl.submerged_length > 0.0 && zm > tpl.embedded_length && zm < z_water_top) {
      double area = sec.area;
      if (opt.added_mass_area == AddedMassArea::enclosed) {
        // back out the outer diameter from the section: A = pi/4 (D^2 - d^2),
        // I = pi/64 (D^4 - d^4) => D^2 + d^2 = 16 I / A... solve directly
        const double sum_sq = 16.0 * sec.inertia / sec.area;       // D^2 + d^2
        const double diff_sq = 4.0 * sec.area / pi;                // D^2 - d^2
        area = pi / 4.0 * 0.5 * (sum_sq + diff_sq);                // pi/4 D^2
      }
      rhoA += opt.seawater_density * area;
    }

    const Eigen::Matrix4d ke = detail::element_stiffness(EI, phi, L);
    const Eigen::Matrix4d me = detail::element_mass_translational(rhoA, phi, L) +
                               detail::element_mass_rotary(sec.density * sec.inertia, phi, L);
    const int dofs[4] = {2 * e, 2 * e + 1, 2 * e + 2, 2 * e + 3};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        sys.stiffness(dofs[i], dofs[j]) += ke(i, j);
        sys.mass(dofs[i], dofs[j]) += me(i, j);
      }
  }

  // Lumped top mass on the tip lateral DOF.
  sys.mass(2 * (n_nodes - 1), 2 * (n_nodes - 1)) += tpl.top_mass;

  // Winkler springs: one point spring per embedded node, stiffness =
  // stiffness_per_length x tributary length (half of each adjacent embedded
  // element). Scour deletes springs above the scour line; surviving springs
  // keep their full tributary share unless rescale_remaining is selected.
  if (tpl.embedded_length > 0.0 && fnd.stiffness_per_length > 0.0) {
    const double tol = 1e-9 * tpl.total_length();
    const double active_top = tpl.embedded_length - fnd.scour_depth;
    double scale = 1.0;
    if (opt.scour_mode == ScourMode::rescale_remaining && fnd.scour_depth > 0.0)
      scale = active_top / tpl.embedded_length;
    for (int i = 0; i < n_nodes; ++i) {
      const double z = sys.node_z[static_cast<std::size_t>(i)];
      if (z > active_top + tol) break;
      double trib = 0.0;
      if (i > 0) {
        const double below = sys.node_z[static_cast<std::size_t>(i) - 1];
        if (below < tpl.embedded_length + tol) trib += 0.5 * (z - below);
      }
      if (i + 1 < n_nodes) {
        const double above = sys.node_z[static_cast<std::size_t>(i) + 1];
        if (above < tpl.embedded_length + tol) trib += 0.5 * (above - z);
      }
      sys.stiffness(2 * i, 2 * i) += scale * fnd.stiffness_per_length * trib;
    }
  }

  // Boundary conditions.
  std::vector<bool> fixed(static_cast<std::size_t>(n_dof), false);
  fixed[0] = true;  // base translation, pinned or clamped
  if (opt.base == BaseCondition::clamped) fixed[1] = true;
  if (opt.rigid_embedment && tpl.embedded_length > 0.0) {
    const double tol = 1e-9 * tpl.total_length();
    for (int i = 0; i < n_nodes; ++i)
      if (sys.node_z[static_cast<std::size_t>(i)] < tpl.embedded_length + tol)
        fixed[static_cast<std::size_t>(2 * i)] = true;
  }
  for (int d = 0; d < n_dof; ++d)
    if (!fixed[static_cast<std::size_t>(d)]) sys.free_dofs.push_back(d);
  return sys;
}

inline ModalResult solve_modes(const AssembledSystem& sys, int n_modes) {
  const auto n_free = static_cast<int>(sys.free_dofs.size());
  if (n_modes < 1 || n_modes > n_free)
    throw std::invalid_argument("solve_modes: n_modes must be in [1, free DOFs]");

  const Eigen::MatrixXd K = sys.reduced(sys.stiffness);
  const Eigen::MatrixXd M = sys.reduced(sys.mass);

  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("solve_modes: mass matrix is not positive definite");

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(K, M, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) throw std::runtime_error("solve_modes: eigensolver failed to converge");

  ModalResult out;
  out.frequencies_hz.reserve(static_cast<std::size_t>(n_modes));
  out.mode_shapes.resize(n_free, n_modes);
  for (int m = 0; m < n_modes; ++m) {
    const double lambda = solver.eigenvalues()(m);
    if (!(lambda > 0.0))
      throw std::runtime_error("solve_modes: non-positive eigenvalue (unrestrained mechanism in the model)");
    out.frequencies_hz.push_back(std::sqrt(lambda) / two_pi);
    out.mode_shapes.col(m) = solver.eigenvectors().col(m);
  }
  return out;
}

inline double first_frequency(const StructureTemplate& tpl, const FoundationModel& fnd,
                              const BuildOptions& opt = {}) {
  return solve_modes(build_system(tpl, fnd, opt), 1).frequencies_hz.front();
}

// Bisect the foundation stiffness so that the first natural frequency hits
// the target. Monotonicity of frequency in stiffness makes bisection safe.
inline double tune_stiffness(const StructureTemplate& tpl, double target_hz,
                             const BuildOptions& opt = {}, double lo = 1e3, double hi = 1e12,
                             double tol_hz = 1e-4) {
  if (!(target_hz > 0.0)) throw std::invalid_argument("tune_stiffness: target must be positive");
  FoundationModel fnd;
  fnd.stiffness_per_length = lo;
  if (first_frequency(tpl, fnd, opt) > target_hz)
    throw std::invalid_argument("tune_stiffness: target below the frequency at the lower bracket");
  fnd.stiffness_per_length = hi;
  if (first_frequency(tpl, fnd, opt) < target_hz)
    throw std::invalid_argument("tune_stiffness: target above the frequency at the upper bracket");
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    fnd.stiffness_per_length = mid;
    const double f = first_frequency(tpl, fnd, opt);
    if (std::abs(f - target_hz) < tol_hz) return mid;
    (f < target_hz ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

// Slender-cantilever design estimate with a concentrated end mass:
// f = (1/2pi) sqrt(3EI / (L^3 (M + 0.24 M_b))).
inline double cantilever_estimate(double youngs, double inertia, double length, double end_mass,
                                  double beam_mass) {
  if (!(youngs > 0.0 && inertia > 0.0 && length > 0.0))
    throw std::invalid_argument("cantilever_estimate: E, I, L must be positive");
  if (end_mass < 0.0 || beam_mass < 0.0)
    throw std::invalid_argument("cantilever_estimate: masses must be non-negative");
  const double effective = end_mass + 0.24 * beam_mass;
  if (!(effective > 0.0)) throw std::invalid_argument("cantilever_estimate: zero effective mass");
  return std::sqrt(3.0 * youngs * inertia / (length * length * length * effective)) / two_pi;
}

// ---------------------------------------------------------------------------
// Built-in templates.

// NREL 5MW reference turbine on a monopile: 75 m monopile (45 m embedded,
// 20 m submerged) joined to the 87.6 m tapered tower. The 350 t nacelle/rotor
// assembly is carried as a solid 3.439 m x 4.8 m steel cylinder continuing
// the beam (pi/4 * 3.439^2 * 4.8 * 7850 = 350 t). Tower density 8500 kg/m^3
// accounts for paint, bolts, welds and flanges.
inline StructureTemplate nrel5mw_template() {
  StructureTemplate tpl;
  BeamSegment monopile;
  monopile.length = 75.0;
  monopile.outer_diameter_base = 6.0;
  monopile.outer_diameter_top = 6.0;
  monopile.wall_thickness_base = 0.0351;
  monopile.wall_thickness_top = 0.0351;
  monopile.density = 7850.0;
  monopile.youngs_modulus = 210e9;
  monopile.poisson_ratio = 0.3;
  monopile.shear_correction_factor = 0.53;
  BeamSegment tower = monopile;
  tower.length = 87.6;
  tower.outer_diameter_top = 3.87;
  tower.wall_thickness_top = 0.0247;
  tower.density = 8500.0;
  BeamSegment nacelle = monopile;
  nacelle.length = 4.8;
  nacelle.outer_diameter_base = 3.439;
  nacelle.outer_diameter_top = 3.439;
  nacelle.wall_thickness_base = 3.439 / 2.0;  // solid
  nacelle.wall_thickness_top = 3.439 / 2.0;
  tpl.segments = {monopile, tower, nacelle};
  tpl.top_mass = 0.0;
  tpl.embedded_length = 45.0;
  tpl.submerged_length = 20.0;
  return tpl;
}

inline StructureTemplate nrel5mw_tower_only() {
  StructureTemplate full = nrel5mw_template();
  StructureTemplate tpl;
  tpl.segments = {full.segments[1], full.segments[2]};
  tpl.top_mass = full.top_mass;
  return tpl;
}

// Wave-tank scale model: 1.5 m copper tube (15 mm OD, 13.6 mm ID) embedded
// 300 mm in a foam foundation, stainless top mass plus vibrometer bracket.
// Density reproduces the 0.401 kg total tube mass including fittings.
inline StructureTemplate wavetank_template() {
  StructureTemplate tpl;
  BeamSegment tube;
  tube.length = 1.5;
  tube.outer_diameter_base = 0.015;
  tube.outer_diameter_top = 0.015;
  tube.wall_thickness_base = 0.0007;
  tube.wall_thickness_top = 0.0007;
  tube.density = 8501.0;
  tube.youngs_modulus = 117e9;  // copper
  tube.poisson_ratio = 0.34;
  tube.shear_correction_factor = 0.53;
  tpl.segments = {tube};
  tpl.top_mass = 1.28 + 0.0364;
  tpl.embedded_length = 0.3;
  tpl.submerged_length = 0.5;
  return tpl;
}

inline StructureTemplate builtin_template(const std::string& name) {
  if (name == "nrel5mw") return nrel5mw_template();
  if (name == "nrel5mw_tower") return nrel5mw_tower_only();
  if (name == "wavetank") return wavetank_template();
  throw std::invalid_argument("unknown built-in template: " + name);
}

// ---------------------------------------------------------------------------
// JSON serialization.

inline void to_json(nlohmann::json& j, const BeamSegment& s) {
  j = {{"length", s.length},
       {"outer_diameter_base", s.outer_diameter_base},
       {"outer_diameter_top", s.outer_diameter_top},
       {"wall_thickness_base", s.wall_thickness_base},
       {"wall_thickness_top", s.wall_thickness_top},
       {"density", s.density},
       {"youngs_modulus", s.youngs_modulus},
       {"poisson_ratio", s.poisson_ratio},
       {"shear_correction_factor", s.shear_correction_factor}};
}

inline void from_json(const nlohmann::json& j, BeamSegment& s) {
  j.at("length").get_to(s.length);
  j.at("outer_diameter_base").get_to(s.outer_diameter_base);
  j.at("outer_diameter_top").get_to(s.outer_diameter_top);
  j.at("wall_thickness_base").get_to(s.wall_thickness_base);
  j.at("wall_thickness_top").get_to(s.wall_thickness_top);
  j.at("density").get_to(s.density);
  j.at("youngs_modulus").get_to(s.youngs_modulus);
  s.poisson_ratio = j.value("poisson_ratio", 0.3);
  s.shear_correction_factor = j.value("shear_correction_factor", 0.53);
}

inline void to_json(nlohmann::json& j, const StructureTemplate& t) {
  j = {{"segments", t.segments},
       {"top_mass", t.top_mass},
       {"embedded_length", t.embedded_length},
       {"submerged_length", t.submerged_length}};
}

inline void from_json(const nlohmann::json& j, StructureTemplate& t) {
  j.at("segments").get_to(t.segments);
  j.at("top_mass").get_to(t.top_mass);
  j.at("embedded_length").get_to(t.embedded_length);
  j.at("submerged_length").get_to(t.submerged_length);
}

inline void to_json(nlohmann::json& j, const FoundationModel& f) {
  j = {{"stiffness_per_length", f.stiffness_per_length}, {"scour_depth", f.scour_depth}};
}

inline void from_json(const nlohmann::json& j, FoundationModel& f) {
  j.at("stiffness_per_length").get_to(f.stiffness_per_length);
  f.scour_depth = j.value("scour_depth", 0.0);
}

}  // namespace pileshm
