#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "nsplace/geometry.hpp"

namespace nsplace {

struct Board {
  double width = 0;
  double height = 0;
  int num_layers = 1;  // metadata only
};

struct PinDef {
  std::string id;
  double ox = 0, oy = 0;  // offset from lower-left, unrotated frame
};

struct Component {
  std::string id;
  double width = 0, height = 0;
  bool fixed = false;
  double fx = 0, fy = 0;  // fixed position, valid iff fixed
  int fr = 0;
  std::vector<PinDef> pins;
};

struct PinRef {
  int comp = -1;
  int pin = -1;
};

struct Net {
  std::string id;
  std::vector<PinRef> pins;
};

struct Design {
  Board board;
  std::vector<Component> components;
  std::vector<Net> nets;

  int comp_index(const std::string& id) const;
  int pin_index(int comp, const std::string& pin_id) const;
  // Flat pin slot across all components, used for gradient accumulation.
  int pin_slot(int comp, int pin) const { return pin_base_[comp] + pin; }
  int total_pins() const { return total_pins_; }
  void finalize();  // builds indices; called by parse_design

 private:
  std::unordered_map<std::string, int> comp_ids_;
  std::vector<int> pin_base_;
  int total_pins_ = 0;
};

// Per-component lower-left coordinates and orientation bit.
// r = 0 unrotated, r = 1 rotated 90 degrees counterclockwise.
struct Placement {
  std::vector<double> x, y;
  std::vector<int> r;

  static Placement zero(const Design& d);
};

struct ParseError : std::runtime_error {
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
  int line;
};

Design parse_design(const std::string& text);
std::string serialize_design(const Design& d);

double eff_width(const Component& c, int r);
double eff_height(const Component& c, int r);
Rect footprint(const Component& c, double x, double y, int r);
Rect footprint(const Design& d, const Placement& p, int comp);

// Pin location under the component's placement. r=1 rotates the footprint
// 90 degrees CCW about its own frame: (ox,oy) -> (h - oy, ox).
Point pin_position(const Placement& p, const Design& d, int comp, int pin);
Point pin_position(double cx, double cy, int r, const Component& c,
                   const PinDef& pin);

struct DesignStats {
  int num_components = 0;
  int num_locked = 0;
  int num_nets = 0;
  int num_pins = 0;
  double utilization = 0;
};

DesignStats design_stats(const Design& d);

// Clips a movable component's lower-left corner so its effective footprint
// stays inside the board. Fixed components are left alone.
void clamp_into_board(const Design& d, Placement& p, int comp);

// Enforces fixed components at their fixed positions (snaps within 1e-6,
// errors beyond).
Placement parse_placement(const std::string& text, const Design& d);
std::string serialize_placement(const Design& d, const Placement& p);

}  // namespace nsplace
