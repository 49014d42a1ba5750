#include "nsplace/milp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nsplace/util.hpp"

namespace nsplace {

namespace {

RelDir pick_direction(const Rect& fi, const Rect& fj, const Gap& g) {
  if (g.dx >= g.dy) {  // ties go horizontal
    double ci = fi.x + 0.5 * fi.w, cj = fj.x + 0.5 * fj.w;
    return ci <= cj ? RelDir::kLeft : RelDir::kRight;
  }
  double ci = fi.y + 0.5 * fi.h, cj = fj.y + 0.5 * fj.h;
  return ci <= cj ? RelDir::kUnder : RelDir::kOver;
}

}  // namespace

std::vector<RelConstraint> derive_relative_constraints(const Placement& p,
                                                       const Design& d,
                                                       double k) {
  std::vector<RelConstraint> out;
  int n = int(d.components.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (d.components[i].fixed && d.components[j].fixed) continue;
      Rect fi = footprint(d, p, i);
      Rect fj = footprint(d, p, j);
      Gap g = rect_gap(fi, fj);
      if (std::max(g.dx, g.dy) < k) continue;
      out.push_back({i, j, pick_direction(fi, fj, g)});
    }
  }
  return out;
}

MilpModel build_model(const Design& d, const std::vector<RelConstraint>& rels) {
  MilpModel m;
  m.design = &d;
  m.rels = rels;
  const double W = d.board.width, H = d.board.height;
  int n = int(d.components.size());
  int ne = int(d.nets.size());
  double dmax = 0;
  for (const auto& c : d.components)
    dmax = std::max(dmax, std::max(c.width, c.height));

  auto add = [&](const std::string& name, double lo, double hi, double obj,
                 bool binary = false) {
    int col = m.prob.add_col(lo, hi, obj);
    m.names.push_back(name);
    if (binary) m.binaries.push_back(col);
    return col;
  };

  m.x_col.resize(n);
  m.y_col.resize(n);
  m.r_col.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    const Component& c = d.components[i];
    double mind = std::min(c.width, c.height);
    m.x_col[i] = add("x" + std::to_string(i), 0, std::max(0.0, W - mind), 0);
    m.y_col[i] = add("y" + std::to_string(i), 0, std::max(0.0, H - mind), 0);
  }
  for (int i = 0; i < n; ++i)
    if (!d.components[i].fixed)
      m.r_col[i] = add("r" + std::to_string(i), 0, 1, 0, true);

  std::vector<std::vector<int>> rel_of(n, std::vector<int>(n, -1));
  for (size_t t = 0; t < rels.size(); ++t)
    rel_of[rels[t].i][rels[t].j] = int(t);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (d.components[i].fixed && d.components[j].fixed) continue;
      if (rel_of[i][j] >= 0) continue;
      PairVars pv;
      pv.i = i;
      pv.j = j;
      std::string sfx = std::to_string(i) + "_" + std::to_string(j);
      pv.p_col = add("p" + sfx, 0, 1, 0, true);
      pv.q_col = add("q" + sfx, 0, 1, 0, true);
      m.pairs.push_back(pv);
    }
  }

  std::vector<int> ux(ne, -1), lx(ne, -1), uy(ne, -1), ly(ne, -1);
  double blo = -(dmax + 1), bhix = W + dmax + 1, bhiy = H + dmax + 1;
  for (int e = 0; e < ne; ++e) {
    std::string se = std::to_string(e);
    ux[e] = add("ux" + se, blo, bhix, 1);
    lx[e] = add("lx" + se, blo, bhix, -1);
    uy[e] = add("uy" + se, blo, bhiy, 1);
    ly[e] = add("ly" + se, blo, bhiy, -1);
  }
  int hmax = -1, hmin = -1;
  if (ne > 0) {
    double rb = 2 * (W + H) + 8 * dmax + 4;
    hmax = add("hmax", -rb, rb, 1);
    hmin = add("hmin", -rb, rb, -1);
  }

  auto& prob = m.prob;
  // Fixed position equalities.
  for (int i = 0; i < n; ++i) {
    const Component& c = d.components[i];
    if (!c.fixed) continue;
    int rx = prob.add_row(lp::Sense::EQ, c.fx);
    prob.add_entry(rx, m.x_col[i], 1.0);
    int ry = prob.add_row(lp::Sense::EQ, c.fy);
    prob.add_entry(ry, m.y_col[i], 1.0);
  }
  // Boundary rows where the orientation changes the effective extent.
  for (int i = 0; i < n; ++i) {
    const Component& c = d.components[i];
    if (c.fixed || c.width == c.height) continue;
    int rx = prob.add_row(lp::Sense::LE, W - c.width);
    prob.add_entry(rx, m.x_col[i], 1.0);
    prob.add_entry(rx, m.r_col[i], c.height - c.width);
    int ry = prob.add_row(lp::Sense::LE, H - c.height);
    prob.add_entry(ry, m.y_col[i], 1.0);
    prob.add_entry(ry, m.r_col[i], c.width - c.height);
  }
  // Net bound rows: U >= pin, L <= pin, pin position linear in r.
  for (int e = 0; e < ne; ++e) {
    for (const auto& ref : d.nets[e].pins) {
      const Component& c = d.components[ref.comp];
      const PinDef& pin = c.pins[ref.pin];
      double dx = c.height - pin.oy - pin.ox;  // r=1 shift of the x offset
      double dy = pin.ox - pin.oy;
      double cx = pin.ox, cy = pin.oy;
      int rcol = m.r_col[ref.comp];
      if (c.fixed) {
        cx += c.fr * dx;
        cy += c.fr * dy;
      }
      auto pin_row = [&](lp::Sense s, int bound_col, int pos_col, double delta,
                         double rhs) {
        int row = prob.add_row(s, rhs);
        prob.add_entry(row, bound_col, 1.0);
        prob.add_entry(row, pos_col, -1.0);
        if (!c.fixed && delta != 0.0) prob.add_entry(row, rcol, -delta);
      };
      pin_row(lp::Sense::GE, ux[e], m.x_col[ref.comp], dx, cx);
      pin_row(lp::Sense::LE, lx[e], m.x_col[ref.comp], dx, cx);
      pin_row(lp::Sense::GE, uy[e], m.y_col[ref.comp], dy, cy);
      pin_row(lp::Sense::LE, ly[e], m.y_col[ref.comp], dy, cy);
    }
  }
  // hpwl range rows.
  for (int e = 0; e < ne; ++e) {
    int rmax = prob.add_row(lp::Sense::GE, 0);
    prob.add_entry(rmax, hmax, 1.0);
    prob.add_entry(rmax, ux[e], -1.0);
    prob.add_entry(rmax, lx[e], 1.0);
    prob.add_entry(rmax, uy[e], -1.0);
    prob.add_entry(rmax, ly[e], 1.0);
    int rmin = prob.add_row(lp::Sense::LE, 0);
    prob.add_entry(rmin, hmin, 1.0);
    prob.add_entry(rmin, ux[e], -1.0);
    prob.add_entry(rmin, lx[e], 1.0);
    prob.add_entry(rmin, uy[e], -1.0);
    prob.add_entry(rmin, ly[e], 1.0);
  }

  // Effective-extent helper: coefficient on r plus constant.
  auto eff_x = [&](int i) {  // width along x
    const Component& c = d.components[i];
    if (c.fixed) return std::pair<double, double>(0.0, eff_width(c, c.fr));
    return std::pair<double, double>(c.height - c.width, c.width);
  };
  auto eff_y = [&](int i) {
    const Component& c = d.components[i];
    if (c.fixed) return std::pair<double, double>(0.0, eff_height(c, c.fr));
    return std::pair<double, double>(c.width - c.height, c.height);
  };
  auto add_sep_row = [&](int a, int b, bool horizontal, double bigm_p,
                         double bigm_q, double bigm_rhs, int p_col, int q_col) {
    // pos_a + eff_a <= pos_b + M-terms
    auto [rc, cst] = horizontal ? eff_x(a) : eff_y(a);
    int row = prob.add_row(lp::Sense::LE, -cst + bigm_rhs);
    prob.add_entry(row, horizontal ? m.x_col[a] : m.y_col[a], 1.0);
    prob.add_entry(row, horizontal ? m.x_col[b] : m.y_col[b], -1.0);
    if (rc != 0.0) prob.add_entry(row, m.r_col[a], rc);
    if (p_col >= 0 && bigm_p != 0.0) prob.add_entry(row, p_col, bigm_p);
    if (q_col >= 0 && bigm_q != 0.0) prob.add_entry(row, q_col, bigm_q);
  };

  // Pruned pairs: one hard row each.
  for (const auto& rel : rels) {
    switch (rel.dir) {
      case RelDir::kLeft:
        add_sep_row(rel.i, rel.j, true, 0, 0, 0, -1, -1);
        break;
      case RelDir::kRight:
        add_sep_row(rel.j, rel.i, true, 0, 0, 0, -1, -1);
        break;
      case RelDir::kUnder:
        add_sep_row(rel.i, rel.j, false, 0, 0, 0, -1, -1);
        break;
      case RelDir::kOver:
        add_sep_row(rel.j, rel.i, false, 0, 0, 0, -1, -1);
        break;
    }
  }
  // Remaining pairs: the four-row disjunction over (p, q).
  for (const auto& pv : m.pairs) {
    add_sep_row(pv.i, pv.j, true, -W, -W, 0, pv.p_col, pv.q_col);       // left
    add_sep_row(pv.i, pv.j, false, -H, H, H, pv.p_col, pv.q_col);       // under
    add_sep_row(pv.j, pv.i, true, W, -W, W, pv.p_col, pv.q_col);        // right
    add_sep_row(pv.j, pv.i, false, H, H, 2 * H, pv.p_col, pv.q_col);    // over
  }
  return m;
}

namespace {

Placement extract_placement(const MilpModel& m, const std::vector<double>& x) {
  const Design& d = *m.design;
  Placement p = Placement::zero(d);
  for (size_t i = 0; i < d.components.size(); ++i) {
    if (d.components[i].fixed) continue;
    p.x[i] = x[m.x_col[i]];
    p.y[i] = x[m.y_col[i]];
    p.r[i] = m.r_col[i] >= 0 ? int(std::lround(x[m.r_col[i]])) : 0;
    clamp_into_board(d, p, int(i));
  }
  return p;
}

// Rounds a placement onto the model's binaries: r bits directly, pair
// binaries from the the larger-gap axis ordering.
void warm_bounds(const MilpModel& m, const Placement& warm,
                 std::vector<double>& lo, std::vector<double>& hi) {
  const Design& d = *m.design;
  for (size_t i = 0; i < d.components.size(); ++i) {
    if (m.r_col[i] < 0) continue;
    lo[m.r_col[i]] = hi[m.r_col[i]] = warm.r[i];
  }
  for (const auto& pv : m.pairs) {
    Rect fi = footprint(d, warm, pv.i);
    Rect fj = footprint(d, warm, pv.j);
    RelDir dir = pick_direction(fi, fj, rect_gap(fi, fj));
    int p = 0, q = 0;
    switch (dir) {
      case RelDir::kLeft: p = 0; q = 0; break;
      case RelDir::kUnder: p = 0; q = 1; break;
      case RelDir::kRight: p = 1; q = 0; break;
      case RelDir::kOver: p = 1; q = 1; break;
    }
    lo[pv.p_col] = hi[pv.p_col] = p;
    lo[pv.q_col] = hi[pv.q_col] = q;
  }
}

}  // namespace

MilpResult solve_milp(const MilpModel& m, const BnbConfig& cfg,
                      const Placement* warm) {
  MilpResult out;
  Timer timer;
  bnb::Incumbent inc;
  if (warm) {
    lp::Simplex simplex(m.prob);
    std::vector<double> lo = m.prob.lo, hi = m.prob.hi;
    warm_bounds(m, *warm, lo, hi);
    lp::Result r = simplex.solve_primal(lo, hi);
    if (r.status == lp::Status::kOptimal) {
      inc.valid = true;
      inc.obj = r.obj;
      inc.x = r.x;
      for (int col : m.binaries) inc.x[col] = std::round(inc.x[col]);
    }
  }
  bnb::Config bc;
  bc.time_cap_s = cfg.time_cap_s;
  bc.abs_gap = cfg.abs_gap;
  bc.node_limit = cfg.node_limit;
  bnb::Result r = bnb::solve(m.prob, m.binaries, bc, inc.valid ? &inc : nullptr);
  out.nodes = r.nodes;
  out.best_bound = r.best_bound;
  out.have_solution = r.have_solution;
  out.budget_exhausted =
      r.nodes >= cfg.node_limit || timer.seconds() > cfg.time_cap_s;
  if (r.have_solution) {
    out.objective = r.obj;
    out.placement = extract_placement(m, r.x);
    out.status = r.status == bnb::Status::kOptimal ? MilpStatus::kOptimal
                                                   : MilpStatus::kFeasibleTimeout;
  } else {
    out.status = MilpStatus::kInfeasible;
  }
  return out;
}

std::string export_lp(const MilpModel& m) {
  const lp::Problem& p = m.prob;
  std::ostringstream os;
  os << "\\ placement legalization model\n";
  if (m.design) {
    for (size_t i = 0; i < m.design->components.size(); ++i)
      os << "\\ comp " << i << " = " << m.design->components[i].id << "\n";
    for (size_t e = 0; e < m.design->nets.size(); ++e)
      os << "\\ net " << e << " = " << m.design->nets[e].id << "\n";
  }
  auto term = [&](std::ostream& o, double coef, const std::string& name,
                  bool first) {
    if (coef == 0) return first;
    if (first) {
      if (coef < 0) o << "- ";
    } else {
      o << (coef < 0 ? " - " : " + ");
    }
    double a = std::abs(coef);
    if (a != 1.0) o << fmt_double(a) << " ";
    o << name;
    return false;
  };
  os << "Minimize\n obj:";
  bool first = true;
  std::ostringstream obj;
  for (int j = 0; j < p.ncols(); ++j)
    first = term(obj, p.obj[j], m.names[j], first);
  if (first) obj << "0 " << (m.names.empty() ? "x0" : m.names[0]);
  os << " " << obj.str() << "\n";

  os << "Subject To\n";
  // Row-wise view of the column-stored matrix.
  std::vector<std::vector<std::pair<int, double>>> rows(p.nrows());
  for (int j = 0; j < p.ncols(); ++j)
    for (const auto& [r, a] : p.cols[j]) rows[r].push_back({j, a});
  for (int r = 0; r < p.nrows(); ++r) {
    os << " c" << r << ":";
    bool f2 = true;
    std::ostringstream body;
    for (const auto& [j, a] : rows[r]) f2 = term(body, a, m.names[j], f2);
    if (f2) body << "0 " << m.names[0];
    os << " " << body.str();
    switch (p.sense[r]) {
      case lp::Sense::LE: os << " <= "; break;
      case lp::Sense::GE: os << " >= "; break;
      case lp::Sense::EQ: os << " = "; break;
    }
    os << fmt_double(p.rhs[r]) << "\n";
  }
  os << "Bounds\n";
  std::vector<bool> is_bin(p.ncols(), false);
  for (int b : m.binaries) is_bin[b] = true;
  for (int j = 0; j < p.ncols(); ++j) {
    if (is_bin[j]) continue;
    os << " " << fmt_double(p.lo[j]) << " <= " << m.names[j] << " <= "
       << fmt_double(p.hi[j]) << "\n";
  }
  os << "Binaries\n";
  for (int b : m.binaries) os << " " << m.names[b] << "\n";
  os << "End\n";
  return os.str();
}

Placement import_solution(const Design& d, const std::string& text) {
  Placement p = Placement::zero(d);
  std::vector<bool> seen(d.components.size(), false);
  std::istringstream in(text);
  std::string name;
  double value;
  while (in >> name >> value) {
    if (name.size() < 2) continue;
    char kind = name[0];
    if (kind != 'x' && kind != 'y' && kind != 'r') continue;
    char* end = nullptr;
    long idx = std::strtol(name.c_str() + 1, &end, 10);
    if (*end != '\0' || idx < 0 || idx >= long(d.components.size())) continue;
    if (d.components[idx].fixed) continue;
    if (kind == 'x') p.x[idx] = value;
    if (kind == 'y') p.y[idx] = value;
    if (kind == 'r') p.r[idx] = value >= 0.5 ? 1 : 0;
    seen[idx] = true;
  }
  for (size_t i = 0; i < seen.size(); ++i)
    if (!seen[i] && !d.components[i].fixed)
      throw std::runtime_error("solution missing component '" +
                               d.components[i].id + "'");
  return p;
}

LegalizeResult legalize(const Design& d, const Placement& gp, double k,
                        const BnbConfig& cfg, bool use_rel_constraints) {
  std::vector<RelConstraint> rels;
  if (use_rel_constraints) rels = derive_relative_constraints(gp, d, k);
  MilpModel m = build_model(d, rels);
  MilpResult r = solve_milp(m, cfg, &gp);
  LegalizeResult out;
  out.status = r.status;
  out.nodes = r.nodes;
  out.objective = r.objective;
  out.num_rel_constraints = int(rels.size());
  if (!r.have_solution) {
    if (r.status == MilpStatus::kInfeasible && !r.budget_exhausted)
      throw std::runtime_error("legalization MILP is infeasible");
    throw std::runtime_error(
        "legalization found no feasible placement within budget");
  }
  out.placement = r.placement;
  return out;
}

}  // namespace nsplace
