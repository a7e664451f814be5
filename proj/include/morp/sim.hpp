#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "morp/gridmap.hpp"
#include "morp/types.hpp"

namespace morp {

struct ObjectSpec {
  int id = 0;
  int type = 0;
  Cell start;
};

struct ReceptacleSpec {
  int type = 0;
  Cell cell;
};

// Where an episode's layout comes from: a generated map (size class + seed) or a map file.
struct MapRef {
  std::optional<SizeClass> size;
  std::uint64_t seed = 0;
  std::string file;

  friend bool operator==(const MapRef&, const MapRef&) = default;
};

inline constexpr std::int64_t kDefaultLowStepCap = 100000;
inline constexpr int kDefaultMaxT = 100;
inline constexpr double kDefaultMaxDist = 10.0;

struct EpisodeSpec {
  MapRef map_ref;
  std::vector<ObjectSpec> objects;  // ids are 0..n_o-1 in order
  std::vector<ReceptacleSpec> receptacles;
  Pose spawn;
  int capacity = 3;
  FovSpec fov;
  int max_t = kDefaultMaxT;
  double max_dist = kDefaultMaxDist;
  std::int64_t low_step_cap = kDefaultLowStepCap;
  std::uint64_t seed = 0;

  // Receptacle cell of object `id` (the correspondence f composed with r).
  Cell receptacle_of(int id) const;
  // Structural checks plus navigability/reachability on `layout`. Throws SpecError.
  void validate(const OccupancyMap& layout) const;
};

enum class EpisodeStatus { Running, Success, Timeout };

std::string_view status_name(EpisodeStatus s);

// What the agent was doing when a step ran; used to attribute object discoveries.
enum class Activity : std::uint8_t { Init, Explore, Plan, Idle };

enum class EventKind : std::uint8_t { Moved, Blocked, Turned, Seen, Grabbed, Dropped, Rearranged, Wasted };

std::string_view event_name(EventKind k);

struct StepEvent {
  EventKind kind;
  int object = -1;
};

struct TraceRow {
  std::int64_t step = 0;
  Action action = Action::Forward;
  Pose pose;  // after the action
  EventKind event = EventKind::Moved;
  int object = -1;
};

struct AgentState {
  Pose pose;
  std::vector<int> slots;  // gripper H by rows: object id per slot, -1 when empty
  std::vector<std::uint8_t> seen;
  double path_length = 0.0;
  std::int64_t low_steps = 0;
  int high_actions = 0;

  int held_count() const;
  bool holding(int id) const;
  // Binary c x n_o gripper matrix.
  std::vector<std::vector<std::uint8_t>> gripper_matrix(std::size_t n_objects) const;
};

struct WorldState {
  std::vector<std::optional<Cell>> object_cells;  // nullopt while held
  std::vector<std::uint8_t> rearranged;
  OccupancyMap map;  // exploration overlay
};

struct EpisodeMetrics {
  double es = 0.0;
  double ror = 0.0;
  double sor = 0.0;
  double mc = 0.0;
  double espl = 0.0;
};

// ES * z / max(z, l), with ESPL = ES when z = l = 0.
double espl(double es, double z, double l);

// One isolated episode state machine.
class Episode {
 public:
  // Runs the initial sensing pass. `visibility` must be built on `layout` with spec.fov.
  Episode(EpisodeSpec spec, const OccupancyMap& layout, std::shared_ptr<const VisibilityTable> visibility);

  const EpisodeSpec& spec() const { return spec_; }
  const WorldState& world() const { return world_; }
  const AgentState& agent() const { return agent_; }
  const OccupancyMap& map() const { return world_.map; }
  const VisibilityTable& visibility() const { return *visibility_; }
  std::size_t object_count() const { return spec_.objects.size(); }

  std::vector<StepEvent> step(Action action);
  EpisodeStatus status() const { return status_; }
  EpisodeStatus check_termination();

  void set_activity(Activity a) { activity_ = a; }
  // Counts one high-level action against max_t.
  void begin_high_level_action();

  std::size_t seen_count() const;
  std::size_t rearranged_count() const;
  bool all_rearranged() const { return rearranged_count() == object_count(); }
  // Seen, not rearranged (includes held objects).
  std::vector<int> pending_objects() const;

  // Activity during which each object was first seen (nullopt if unseen).
  const std::vector<std::optional<Activity>>& first_seen_activity() const { return first_seen_activity_; }
  // Agent path length at the first sighting of any object (nullopt if none seen).
  std::optional<double> first_object_path() const { return first_object_path_; }
  // Agent path length when the last unseen object was first seen (nullopt until then).
  std::optional<double> all_seen_path() const { return all_seen_path_; }

  EpisodeMetrics compute_metrics(double oracle_z) const;

  const std::vector<TraceRow>& trace() const { return trace_; }
  void set_trace_enabled(bool on) { trace_enabled_ = on; }

 private:
  std::vector<StepEvent> sense();
  void grab_drop(std::vector<StepEvent>& events);
  void update_rearranged(std::vector<StepEvent>& events);
  void log(Action a, const std::vector<StepEvent>& events);

  EpisodeSpec spec_;
  std::shared_ptr<const VisibilityTable> visibility_;
  WorldState world_;
  AgentState agent_;
  EpisodeStatus status_ = EpisodeStatus::Running;
  Activity activity_ = Activity::Init;
  std::vector<std::optional<Activity>> first_seen_activity_;
  std::optional<double> first_object_path_;
  std::optional<double> all_seen_path_;
  std::vector<std::uint32_t> scratch_;
  std::vector<TraceRow> trace_;
  bool trace_enabled_ = true;
};

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

}  // namespace morp
