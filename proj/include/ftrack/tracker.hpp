#pragma once

#include "ftrack/problem.hpp"
#include "ftrack/riemann.hpp"
#include "ftrack/step_function.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <vector>

namespace ftrack {

enum class FrontKind { moving, interface };

/// A front as seen at some time: x(t) = origin + speed (t - created).
struct Front {
  double origin = 0.0;
  double created = 0.0;
  double speed = 0.0;
  double left = 0.0;
  double right = 0.0;
  FrontKind kind = FrontKind::moving;
  /// -1 when governed by g (left of the interface), +1 for f.
  int side = -1;

  double position(double t) const { return origin + speed * (t - created); }
};

/// One resolved interaction.
struct CollisionRecord {
  double time = 0.0;
  double x = 0.0;
  bool at_interface = false;
  std::vector<Front> incoming;
  std::vector<Front> outgoing;
};

/// Interface trace pair valid from `time` until the next record.
struct TraceRecord {
  double time = 0.0;
  TracePair pair;
};

struct TrackerOptions {
  std::size_t max_fronts = 1'000'000;
  std::size_t max_collisions = 10'000'000;
  /// Keep a CollisionRecord for every interaction.
  bool event_log = false;
  /// Verify ordering, chaining and the invariant region after every interaction.
  bool check_invariants = false;
  std::function<void(const CollisionRecord&)> observer;
};

/// Exact solution of the problem with piecewise-linear fluxes and
/// piecewise-constant data, evolved event by event.
class FrontTrackingState {
 public:
  FrontTrackingState(DiscreteFluxes fluxes, const StepFunction& initial, TrackerOptions options = {});

  /// Processes every interaction with time <= t_target and moves to t_target.
  void advance(double t_target);
  /// Snapshot at t >= time(); throws StaleSample if an interaction lies in (time(), t].
  StepFunction sample(double t) const;
  StepFunction snapshot() const { return sample(time_); }

  double time() const { return time_; }
  /// Live fronts in left-to-right order.
  std::vector<Front> fronts() const;
  std::size_t front_count() const { return live_; }
  std::size_t max_front_count() const { return peak_fronts_; }
  std::size_t collision_count() const { return collisions_; }
  /// Time of the next pending interaction, or +inf.
  double next_event_time() const;

  const std::vector<TraceRecord>& interface_traces() const { return traces_; }
  const std::vector<CollisionRecord>& event_log() const { return log_; }
  const DiscreteFluxes& fluxes() const { return fluxes_; }
  /// Smallest and largest state ever created.
  double min_state() const { return min_state_; }
  double max_state() const { return max_state_; }
  /// Worst relative Rankine-Hugoniot defect over all fronts ever created.
  double max_rankine_hugoniot_defect() const { return max_rh_defect_; }
  /// Number of interface solves that needed the minimal-jump tie-break.
  std::size_t tie_breaks() const { return tie_breaks_; }

  /// Throws Error on broken ordering, chaining or invariant region.
  void check_invariants() const;

 private:
  struct Node {
    Front front;
    int prev = -1;
    int next = -1;
    std::uint32_t version = 0;
    bool alive = false;
  };
  struct Event {
    double time;
    double x;
    int left;
    int right;
    std::uint32_t left_version;
    std::uint32_t right_version;
    bool operator>(const Event& o) const { return time != o.time ? time > o.time : x > o.x; }
  };

  int allocate(const Front& f);
  void release(int id);
  void schedule(int left_id);
  bool valid(const Event& e) const;
  void resolve(const Event& e);
  std::vector<int> build_fan(const WaveFan& fan, double x, double t, int side);
  void link_between(int before, const std::vector<int>& ids, int after);
  void note_front(const Front& f);
  double position_tolerance(double x) const;

  DiscreteFluxes fluxes_;
  TrackerOptions options_;
  double max_speed_ = 0.0;
  std::vector<Node> nodes_;
  std::vector<int> free_;
  int head_ = -1;
  int tail_ = -1;
  double u_left_ = 0.0;
  double u_right_ = 0.0;
  double time_ = 0.0;
  std::size_t live_ = 0;
  std::size_t peak_fronts_ = 0;
  std::size_t collisions_ = 0;
  std::size_t tie_breaks_ = 0;
  double min_state_ = 0.0;
  double max_state_ = 0.0;
  double max_rh_defect_ = 0.0;
  mutable std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::vector<TraceRecord> traces_;
  std::vector<CollisionRecord> log_;
};

/// Front tracking solution at time t.
StepFunction track(const DiscreteFluxes& fluxes, const StepFunction& initial, double t, TrackerOptions options = {});

std::string format_record(const CollisionRecord& record);

}  // namespace ftrack
