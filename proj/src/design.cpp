#include "nsplace/design.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "nsplace/util.hpp"

namespace nsplace {

int Design::comp_index(const std::string& id) const {
  auto it = comp_ids_.find(id);
  return it == comp_ids_.end() ? -1 : it->second;
}

int Design::pin_index(int comp, const std::string& pin_id) const {
  const auto& pins = components[comp].pins;
  for (size_t i = 0; i < pins.size(); ++i)
    if (pins[i].id == pin_id) return int(i);
  return -1;
}

void Design::finalize() {
  comp_ids_.clear();
  pin_base_.assign(components.size(), 0);
  total_pins_ = 0;
  for (size_t i = 0; i < components.size(); ++i) {
    comp_ids_[components[i].id] = int(i);
    pin_base_[i] = total_pins_;
    total_pins_ += int(components[i].pins.size());
  }
}

Placement Placement::zero(const Design& d) {
  Placement p;
  size_t n = d.components.size();
  p.x.assign(n, 0);
  p.y.assign(n, 0);
  p.r.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    if (d.components[i].fixed) {
      p.x[i] = d.components[i].fx;
      p.y[i] = d.components[i].fy;
      p.r[i] = d.components[i].fr;
    }
  }
  return p;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

double parse_num(const std::string& tok, int line) {
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || !std::isfinite(v))
    throw ParseError(line, "expected a number, got '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, int line) {
  double v = parse_num(tok, line);
  if (v != std::floor(v)) throw ParseError(line, "expected an integer");
  return int(v);
}

}  // namespace

Design parse_design(const std::string& text) {
  Design d;
  bool have_board = false;
  std::unordered_map<std::string, int> comp_lookup;
  struct RawNet {
    std::string id;
    std::vector<std::pair<std::string, std::string>> refs;
    int line;
  };
  std::vector<RawNet> raw_nets;

  std::istringstream in(text);
  std::string linebuf;
  int lineno = 0;
  while (std::getline(in, linebuf)) {
    ++lineno;
    auto hash = linebuf.find('#');
    if (hash != std::string::npos) linebuf.erase(hash);
    auto toks = split_ws(linebuf);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    if (kw == "board") {
      if (have_board) throw ParseError(lineno, "duplicate board statement");
      if (toks.size() != 4) throw ParseError(lineno, "board <W> <H> <layers>");
      d.board.width = parse_num(toks[1], lineno);
      d.board.height = parse_num(toks[2], lineno);
      d.board.num_layers = parse_int(toks[3], lineno);
      if (d.board.width <= 0 || d.board.height <= 0)
        throw ParseError(lineno, "board dimensions must be positive");
      if (d.board.num_layers < 1)
        throw ParseError(lineno, "layer count must be positive");
      have_board = true;
    } else if (kw == "comp") {
      if (toks.size() != 4 && toks.size() != 8)
        throw ParseError(lineno, "comp <id> <w> <h> [fixed <x> <y> <r>]");
      Component c;
      c.id = toks[1];
      c.width = parse_num(toks[2], lineno);
      c.height = parse_num(toks[3], lineno);
      if (c.width <= 0 || c.height <= 0)
        throw ParseError(lineno,
                         "component '" + c.id + "' has nonpositive dimension");
      if (toks.size() == 8) {
        if (toks[4] != "fixed") throw ParseError(lineno, "expected 'fixed'");
        c.fixed = true;
        c.fx = parse_num(toks[5], lineno);
        c.fy = parse_num(toks[6], lineno);
        c.fr = parse_int(toks[7], lineno);
        if (c.fr != 0 && c.fr != 1)
          throw ParseError(lineno, "orientation must be 0 or 1");
      }
      if (comp_lookup.count(c.id))
        throw ParseError(lineno, "duplicate component id '" + c.id + "'");
      comp_lookup[c.id] = int(d.components.size());
      d.components.push_back(std::move(c));
    } else if (kw == "pin") {
      if (toks.size() != 5)
        throw ParseError(lineno, "pin <comp-id> <pin-id> <ox> <oy>");
      auto it = comp_lookup.find(toks[1]);
      if (it == comp_lookup.end())
        throw ParseError(lineno, "pin references unknown component '" +
                                     toks[1] + "'");
      Component& c = d.components[it->second];
      PinDef pd;
      pd.id = toks[2];
      pd.ox = parse_num(toks[3], lineno);
      pd.oy = parse_num(toks[4], lineno);
      for (const auto& existing : c.pins)
        if (existing.id == pd.id)
          throw ParseError(lineno, "duplicate pin id '" + pd.id +
                                       "' on component '" + c.id + "'");
      if (pd.ox < 0 || pd.ox > c.width || pd.oy < 0 || pd.oy > c.height)
        throw ParseError(lineno, "pin '" + pd.id + "' offset outside footprint");
      c.pins.push_back(std::move(pd));
    } else if (kw == "net") {
      if (toks.size() < 3)
        throw ParseError(lineno, "net <id> <comp>.<pin> <comp>.<pin> ...");
      RawNet rn;
      rn.id = toks[1];
      rn.line = lineno;
      for (size_t i = 2; i < toks.size(); ++i) {
        auto dot = toks[i].find('.');
        if (dot == std::string::npos)
          throw ParseError(lineno, "net pin reference '" + toks[i] +
                                       "' must be <comp>.<pin>");
        rn.refs.push_back({toks[i].substr(0, dot), toks[i].substr(dot + 1)});
      }
      raw_nets.push_back(std::move(rn));
    } else {
      throw ParseError(lineno, "unknown statement '" + kw + "'");
    }
  }
  if (!have_board) throw ParseError(lineno, "missing board statement");

  d.finalize();
  std::unordered_map<std::string, bool> net_ids;
  for (const auto& rn : raw_nets) {
    if (net_ids.count(rn.id))
      throw ParseError(rn.line, "duplicate net id '" + rn.id + "'");
    net_ids[rn.id] = true;
    Net net;
    net.id = rn.id;
    for (const auto& [cid, pid] : rn.refs) {
      int ci = d.comp_index(cid);
      if (ci < 0)
        throw ParseError(rn.line, "net '" + rn.id +
                                      "' references unknown component '" +
                                      cid + "'");
      int pi = d.pin_index(ci, pid);
      if (pi < 0)
        throw ParseError(rn.line, "net '" + rn.id + "' references unknown pin '" +
                                      cid + "." + pid + "'");
      net.pins.push_back({ci, pi});
    }
    d.nets.push_back(std::move(net));
  }
  // Fixed components must sit inside the board.
  for (const auto& c : d.components) {
    if (!c.fixed) continue;
    Rect fp = footprint(c, c.fx, c.fy, c.fr);
    if (fp.x < -kGeomEps || fp.y < -kGeomEps ||
        fp.x + fp.w > d.board.width + kGeomEps ||
        fp.y + fp.h > d.board.height + kGeomEps)
      throw ParseError(0, "fixed component '" + c.id + "' is out of bounds");
  }
  return d;
}

std::string serialize_design(const Design& d) {
  std::ostringstream out;
  out << "board " << fmt_double(d.board.width) << " "
      << fmt_double(d.board.height) << " " << d.board.num_layers << "\n";
  for (const auto& c : d.components) {
    out << "comp " << c.id << " " << fmt_double(c.width) << " "
        << fmt_double(c.height);
    if (c.fixed)
      out << " fixed " << fmt_double(c.fx) << " " << fmt_double(c.fy) << " "
          << c.fr;
    out << "\n";
  }
  for (const auto& c : d.components)
    for (const auto& p : c.pins)
      out << "pin " << c.id << " " << p.id << " " << fmt_double(p.ox) << " "
          << fmt_double(p.oy) << "\n";
  for (const auto& n : d.nets) {
    out << "net " << n.id;
    for (const auto& ref : n.pins)
      out << " " << d.components[ref.comp].id << "."
          << d.components[ref.comp].pins[ref.pin].id;
    out << "\n";
  }
  return out.str();
}

double eff_width(const Component& c, int r) { return r ? c.height : c.width; }
double eff_height(const Component& c, int r) { return r ? c.width : c.height; }

Rect footprint(const Component& c, double x, double y, int r) {
  return Rect{x, y, eff_width(c, r), eff_height(c, r)};
}

Rect footprint(const Design& d, const Placement& p, int comp) {
  return footprint(d.components[comp], p.x[comp], p.y[comp], p.r[comp]);
}

Point pin_position(double cx, double cy, int r, const Component& c,
                   const PinDef& pin) {
  if (r == 0) return Point{cx + pin.ox, cy + pin.oy};
  return Point{cx + c.height - pin.oy, cy + pin.ox};
}

Point pin_position(const Placement& p, const Design& d, int comp, int pin) {
  const Component& c = d.components[comp];
  return pin_position(p.x[comp], p.y[comp], p.r[comp], c, c.pins[pin]);
}

DesignStats design_stats(const Design& d) {
  DesignStats s;
  s.num_components = int(d.components.size());
  s.num_nets = int(d.nets.size());
  double area = 0;
  for (const auto& c : d.components) {
    if (c.fixed) ++s.num_locked;
    s.num_pins += int(c.pins.size());
    area += c.width * c.height;
  }
  double board = d.board.width * d.board.height;
  s.utilization = board > 0 ? area / board : 0;
  return s;
}

void clamp_into_board(const Design& d, Placement& p, int comp) {
  const Component& c = d.components[comp];
  if (c.fixed) return;
  double we = eff_width(c, p.r[comp]);
  double he = eff_height(c, p.r[comp]);
  p.x[comp] = std::min(std::max(p.x[comp], 0.0),
                       std::max(0.0, d.board.width - we));
  p.y[comp] = std::min(std::max(p.y[comp], 0.0),
                       std::max(0.0, d.board.height - he));
}

Placement parse_placement(const std::string& text, const Design& d) {
  Placement p = Placement::zero(d);
  std::vector<bool> seen(d.components.size(), false);
  std::istringstream in(text);
  std::string linebuf;
  int lineno = 0;
  while (std::getline(in, linebuf)) {
    ++lineno;
    auto hash = linebuf.find('#');
    if (hash != std::string::npos) linebuf.erase(hash);
    auto toks = split_ws(linebuf);
    if (toks.empty()) continue;
    if (toks[0] != "place" || toks.size() != 5)
      throw ParseError(lineno, "place <comp-id> <x> <y> <r>");
    int ci = d.comp_index(toks[1]);
    if (ci < 0)
      throw ParseError(lineno, "unknown component '" + toks[1] + "'");
    double x = parse_num(toks[2], lineno);
    double y = parse_num(toks[3], lineno);
    int r = parse_int(toks[4], lineno);
    if (r != 0 && r != 1) throw ParseError(lineno, "orientation must be 0 or 1");
    const Component& c = d.components[ci];
    if (c.fixed) {
      if (std::abs(x - c.fx) > 1e-6 || std::abs(y - c.fy) > 1e-6 || r != c.fr)
        throw ParseError(lineno, "fixed component '" + c.id +
                                     "' placed away from its fixed position");
      x = c.fx;
      y = c.fy;
      r = c.fr;
    }
    p.x[ci] = x;
    p.y[ci] = y;
    p.r[ci] = r;
    seen[ci] = true;
  }
  for (size_t i = 0; i < seen.size(); ++i)
    if (!seen[i] && !d.components[i].fixed)
      throw ParseError(0, "missing placement for component '" +
                              d.components[i].id + "'");
  return p;
}

std::string serialize_placement(const Design& d, const Placement& p) {
  std::ostringstream out;
  for (size_t i = 0; i < d.components.size(); ++i)
    out << "place " << d.components[i].id << " " << fmt_double(p.x[i]) << " "
        << fmt_double(p.y[i]) << " " << p.r[i] << "\n";
  return out.str();
}

}  // namespace nsplace
