#include "ftrack/tracker.hpp"

#include "ftrack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace ftrack {

FrontTrackingState::FrontTrackingState(DiscreteFluxes fluxes, const StepFunction& initial, TrackerOptions options)
    : fluxes_(std::move(fluxes)), options_(std::move(options)) {
  max_speed_ = fluxes_.max_lipschitz();
  u_left_ = initial.left_value();
  u_right_ = initial.right_value();
  const StateInterval dom = fluxes_.states;
  const double slack = 1e-12 * dom.width();
  for (double v : initial.values())
    if (!dom.contains(v, slack)) throw DomainError("initial data leaves the state interval");
  min_state_ = *std::min_element(initial.values().begin(), initial.values().end());
  max_state_ = *std::max_element(initial.values().begin(), initial.values().end());

  const auto& jumps = initial.jumps();
  const auto& values = initial.values();
  std::vector<int> ids;
  auto append = [&](const std::vector<int>& more) { ids.insert(ids.end(), more.begin(), more.end()); };
  bool interface_done = fluxes_.same_flux;
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const double x = jumps[i];
    if (!interface_done && x >= 0.0) {
      // values[i] holds on the interval ending at the first jump >= 0.
      const double ul = values[i];
      const double ur = x == 0.0 ? values[i + 1] : values[i];
      const InterfaceSolution sol = solve_interface(fluxes_.left, fluxes_.right, ul, ur);
      append(build_fan(sol.left, 0.0, 0.0, -1));
      Front iface{0.0, 0.0, 0.0, sol.trace.u_minus, sol.trace.u_plus, FrontKind::interface, 0};
      note_front(iface);
      ids.push_back(allocate(iface));
      append(build_fan(sol.right, 0.0, 0.0, +1));
      traces_.push_back({0.0, sol.trace});
      if (sol.tie_break) ++tie_breaks_;
      interface_done = true;
      if (x == 0.0) continue;
    }
    const int side = fluxes_.same_flux ? -1 : (x < 0.0 ? -1 : +1);
    const auto& q = side < 0 ? fluxes_.left : fluxes_.right;
    append(build_fan(solve_classic(q, values[i], values[i + 1]), x, 0.0, side));
  }
  if (!interface_done) {
    const double u = values.back();
    const InterfaceSolution sol = solve_interface(fluxes_.left, fluxes_.right, u, u);
    append(build_fan(sol.left, 0.0, 0.0, -1));
    Front iface{0.0, 0.0, 0.0, sol.trace.u_minus, sol.trace.u_plus, FrontKind::interface, 0};
    note_front(iface);
    ids.push_back(allocate(iface));
    append(build_fan(sol.right, 0.0, 0.0, +1));
    traces_.push_back({0.0, sol.trace});
    if (sol.tie_break) ++tie_breaks_;
  }
  link_between(-1, ids, -1);
  for (int id : ids) schedule(id);
  if (options_.check_invariants) check_invariants();
}

int FrontTrackingState::allocate(const Front& f) {
  if (live_ >= options_.max_fronts)
    throw ResourceError("front cap of " + std::to_string(options_.max_fronts) + " exceeded at t=" +
                        std::to_string(time_));
  int id;
  if (!free_.empty()) {
    id = free_.back();
    free_.pop_back();
  } else {
    id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
  }
  Node& n = nodes_[static_cast<std::size_t>(id)];
  n.front = f;
  n.prev = n.next = -1;
  ++n.version;
  n.alive = true;
  ++live_;
  peak_fronts_ = std::max(peak_fronts_, live_);
  return id;
}

void FrontTrackingState::release(int id) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  n.alive = false;
  ++n.version;
  free_.push_back(id);
  --live_;
}

void FrontTrackingState::note_front(const Front& f) {
  min_state_ = std::min({min_state_, f.left, f.right});
  max_state_ = std::max({max_state_, f.left, f.right});
  if (f.kind == FrontKind::interface) return;
  const auto& q = f.side < 0 ? fluxes_.left : fluxes_.right;
  const double lhs = f.speed * (f.right - f.left);
  const double rhs = q(f.right) - q(f.left);
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  max_rh_defect_ = std::max(max_rh_defect_, std::abs(lhs - rhs) / scale);
}

std::vector<int> FrontTrackingState::build_fan(const WaveFan& fan, double x, double t, int side) {
  std::vector<int> ids;
  ids.reserve(fan.fronts.size());
  for (const auto& w : fan.fronts) {
    Front f{x, t, w.speed, w.left, w.right, FrontKind::moving, side};
    note_front(f);
    ids.push_back(allocate(f));
  }
  return ids;
}

void FrontTrackingState::link_between(int before, const std::vector<int>& ids, int after) {
  int prev = before;
  for (int id : ids) {
    nodes_[static_cast<std::size_t>(id)].prev = prev;
    if (prev >= 0)
      nodes_[static_cast<std::size_t>(prev)].next = id;
    else
      head_ = id;
    prev = id;
  }
  if (prev >= 0)
    nodes_[static_cast<std::size_t>(prev)].next = after;
  else
    head_ = after;
  if (after >= 0)
    nodes_[static_cast<std::size_t>(after)].prev = prev;
  else
    tail_ = prev;
}

void FrontTrackingState::schedule(int left_id) {
  if (left_id < 0) return;
  const Node& a = nodes_[static_cast<std::size_t>(left_id)];
  if (a.next < 0) return;
  const Node& b = nodes_[static_cast<std::size_t>(a.next)];
  const double sa = a.front.speed;
  const double sb = b.front.speed;
  if (!(sa > sb)) return;
  const double xa = a.front.position(time_);
  const double xb = b.front.position(time_);
  const double dt = std::max(0.0, xb - xa) / (sa - sb);
  if (!std::isfinite(dt)) return;
  const double t = time_ + dt;
  events_.push({t, xa + sa * dt, left_id, a.next, a.version, b.version});
}

bool FrontTrackingState::valid(const Event& e) const {
  const Node& a = nodes_[static_cast<std::size_t>(e.left)];
  const Node& b = nodes_[static_cast<std::size_t>(e.right)];
  return a.alive && b.alive && a.version == e.left_version && b.version == e.right_version && a.next == e.right;
}

double FrontTrackingState::next_event_time() const {
  while (!events_.empty() && !valid(events_.top())) events_.pop();
  return events_.empty() ? std::numeric_limits<double>::infinity() : events_.top().time;
}

double FrontTrackingState::position_tolerance(double x) const {
  return 1e-13 * std::max(1.0, std::abs(x) + time_ * max_speed_);
}

void FrontTrackingState::advance(double t_target) {
  if (t_target < time_) throw InvalidInput("cannot advance backwards in time");
  while (next_event_time() <= t_target) {
    const Event e = events_.top();
    events_.pop();
    resolve(e);
  }
  time_ = t_target;
}

void FrontTrackingState::resolve(const Event& e) {
  if (++collisions_ > options_.max_collisions)
    throw ResourceError("collision cap of " + std::to_string(options_.max_collisions) + " exceeded at t=" +
                        std::to_string(time_));
  time_ = std::max(time_, e.time);
  auto pos = [&](int id) { return nodes_[static_cast<std::size_t>(id)].front.position(time_); };
  const double x_star = 0.5 * (pos(e.left) + pos(e.right));
  const double tol = position_tolerance(x_star);

  int first = e.left;
  int last = e.right;
  while (nodes_[static_cast<std::size_t>(first)].prev >= 0 &&
         std::abs(pos(nodes_[static_cast<std::size_t>(first)].prev) - x_star) <= tol)
    first = nodes_[static_cast<std::size_t>(first)].prev;
  while (nodes_[static_cast<std::size_t>(last)].next >= 0 &&
         std::abs(pos(nodes_[static_cast<std::size_t>(last)].next) - x_star) <= tol)
    last = nodes_[static_cast<std::size_t>(last)].next;

  CollisionRecord record;
  record.time = time_;
  const bool keep = options_.event_log || static_cast<bool>(options_.observer);
  bool at_interface = false;
  int side = nodes_[static_cast<std::size_t>(first)].front.side;
  const double ul = nodes_[static_cast<std::size_t>(first)].front.left;
  const double ur = nodes_[static_cast<std::size_t>(last)].front.right;
  const int before = nodes_[static_cast<std::size_t>(first)].prev;
  const int after = nodes_[static_cast<std::size_t>(last)].next;
  for (int id = first;; id = nodes_[static_cast<std::size_t>(id)].next) {
    Front f = nodes_[static_cast<std::size_t>(id)].front;
    if (f.kind == FrontKind::interface) at_interface = true;
    if (keep) {
      f.origin = f.position(time_);
      f.created = time_;
      record.incoming.push_back(f);
    }
    release(id);
    if (id == last) break;
  }

  std::vector<int> ids;
  if (at_interface) {
    record.x = 0.0;
    const InterfaceSolution sol = solve_interface(fluxes_.left, fluxes_.right, ul, ur);
    ids = build_fan(sol.left, 0.0, time_, -1);
    Front iface{0.0, time_, 0.0, sol.trace.u_minus, sol.trace.u_plus, FrontKind::interface, 0};
    note_front(iface);
    ids.push_back(allocate(iface));
    const auto right = build_fan(sol.right, 0.0, time_, +1);
    ids.insert(ids.end(), right.begin(), right.end());
    traces_.push_back({time_, sol.trace});
    if (sol.tie_break) ++tie_breaks_;
  } else {
    record.x = x_star;
    if (side == 0) side = -1;
    const auto& q = side < 0 ? fluxes_.left : fluxes_.right;
    ids = build_fan(solve_classic(q, ul, ur), x_star, time_, side);
  }
  record.at_interface = at_interface;
  link_between(before, ids, after);
  schedule(before);
  for (int id : ids) schedule(id);

  if (keep) {
    for (int id : ids) record.outgoing.push_back(nodes_[static_cast<std::size_t>(id)].front);
    if (options_.observer) options_.observer(record);
    if (options_.event_log) log_.push_back(std::move(record));
  }
  if (options_.check_invariants) check_invariants();
}

std::vector<Front> FrontTrackingState::fronts() const {
  std::vector<Front> out;
  out.reserve(live_);
  for (int id = head_; id >= 0; id = nodes_[static_cast<std::size_t>(id)].next) {
    Front f = nodes_[static_cast<std::size_t>(id)].front;
    f.origin = f.position(time_);
    f.created = time_;
    out.push_back(f);
  }
  return out;
}

StepFunction FrontTrackingState::sample(double t) const {
  if (t < time_) throw InvalidInput("sample time precedes the state time");
  if (t > time_ && next_event_time() <= t) throw StaleSample("an interaction lies between the state time and t");
  std::vector<double> positions;
  std::vector<double> values{u_left_};
  positions.reserve(live_);
  values.reserve(live_ + 1);
  for (int id = head_; id >= 0; id = nodes_[static_cast<std::size_t>(id)].next) {
    const Front& f = nodes_[static_cast<std::size_t>(id)].front;
    double x = f.position(t);
    if (!positions.empty()) x = std::max(x, positions.back());
    positions.push_back(x);
    values.push_back(f.right);
  }
  return StepFunction::from_breaks(positions, values);
}

void FrontTrackingState::check_invariants() const {
  const StateInterval dom = fluxes_.states;
  const double slack = 1e-12 * dom.width();
  double prev_state = u_left_;
  double prev_x = -std::numeric_limits<double>::infinity();
  int prev_side = -1;
  bool seen_interface = false;
  for (int id = head_; id >= 0; id = nodes_[static_cast<std::size_t>(id)].next) {
    const Front& f = nodes_[static_cast<std::size_t>(id)].front;
    const double x = f.position(time_);
    if (f.left != prev_state) throw Error("front states do not chain");
    if (x < prev_x - position_tolerance(x)) throw Error("fronts out of order");
    if (!dom.contains(f.left, slack) || !dom.contains(f.right, slack)) throw Error("state outside the invariant region");
    if (f.kind == FrontKind::interface) {
      if (x != 0.0 || f.speed != 0.0) throw Error("interface moved");
      seen_interface = true;
    } else {
      if (f.side < prev_side) throw Error("front on the wrong side of the interface");
      if (f.side > 0 && !seen_interface) throw Error("right front left of the interface");
      prev_side = f.side;
    }
    prev_state = f.right;
    prev_x = x;
  }
  if (prev_state != u_right_) throw Error("right far field not preserved");
  if (!fluxes_.same_flux && !seen_interface) throw Error("interface front missing");
}

StepFunction track(const DiscreteFluxes& fluxes, const StepFunction& initial, double t, TrackerOptions options) {
  FrontTrackingState state(fluxes, initial, std::move(options));
  state.advance(t);
  return state.snapshot();
}

std::string format_record(const CollisionRecord& record) {
  std::ostringstream out;
  out << std::setprecision(17) << "t=" << record.time << " x=" << record.x
      << (record.at_interface ? " interface" : "") << " in:";
  for (const auto& f : record.incoming) out << " [" << f.left << "->" << f.right << " s=" << f.speed << "]";
  out << " out:";
  for (const auto& f : record.outgoing) out << " [" << f.left << "->" << f.right << " s=" << f.speed << "]";
  return out.str();
}

}  // namespace ftrack
