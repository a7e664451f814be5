#include "morp/sim.hpp"

#include <algorithm>
#include <set>

#include "morp/pathfind.hpp"

namespace morp {

Cell EpisodeSpec::receptacle_of(int id) const {
  const int type = objects.at(static_cast<std::size_t>(id)).type;
  for (const auto& r : receptacles) {
    if (r.type == type) return r.cell;
  }
  throw SpecError("object " + std::to_string(id) + " has no receptacle");
}

void EpisodeSpec::validate(const OccupancyMap& layout) const {
  if (capacity < 1) throw SpecError("capacity must be >= 1");
  if (max_t < 1) throw SpecError("max_t must be >= 1");
  if (!(max_dist > 0.0)) throw SpecError("max_dist must be > 0");
  if (low_step_cap < 1) throw SpecError("low_step_cap must be >= 1");
  try {
    fov.validate();
  } catch (const PreconditionError& e) {
    throw SpecError(e.what());
  }
  std::set<int> receptacle_types;
  for (const auto& r : receptacles) {
    if (!receptacle_types.insert(r.type).second) {
      throw SpecError("receptacle type " + std::to_string(r.type) + " appears twice");
    }
  }
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].id != static_cast<int>(i)) throw SpecError("object ids must be 0..n_o-1 in order");
    if (!receptacle_types.contains(objects[i].type)) {
      throw SpecError("object " + std::to_string(i) + " has no receptacle of its type");
    }
  }
  if (!layout.navigable(spawn.cell)) throw SpecError("spawn cell is not navigable");
  const std::vector<std::uint8_t> reach = reachable_mask(layout, spawn.cell);
  auto check = [&](Cell c, const std::string& what) {
    if (!layout.navigable(c)) throw SpecError(what + " is not navigable");
    if (!reach[layout.index(c)]) throw SpecError(what + " is unreachable from spawn");
  };
  for (const auto& o : objects) check(o.start, "object " + std::to_string(o.id));
  for (const auto& r : receptacles) check(r.cell, "receptacle " + std::to_string(r.type));
}

std::string_view status_name(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::Running: return "running";
    case EpisodeStatus::Success: return "success";
    case EpisodeStatus::Timeout: return "timeout";
  }
  return "?";
}

std::string_view event_name(EventKind k) {
  switch (k) {
    case EventKind::Moved: return "moved";
    case EventKind::Blocked: return "blocked";
    case EventKind::Turned: return "turned";
    case EventKind::Seen: return "seen";
    case EventKind::Grabbed: return "grabbed";
    case EventKind::Dropped: return "dropped";
    case EventKind::Rearranged: return "rearranged";
    case EventKind::Wasted: return "wasted";
  }
  return "?";
}

int AgentState::held_count() const {
  return static_cast<int>(std::count_if(slots.begin(), slots.end(), [](int s) { return s >= 0; }));
}

bool AgentState::holding(int id) const { return std::find(slots.begin(), slots.end(), id) != slots.end(); }

std::vector<std::vector<std::uint8_t>> AgentState::gripper_matrix(std::size_t n_objects) const {
  std::vector<std::vector<std::uint8_t>> h(slots.size(), std::vector<std::uint8_t>(n_objects, 0));
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (slots[s] >= 0) h[s][static_cast<std::size_t>(slots[s])] = 1;
  }
  return h;
}

double espl(double es, double z, double l) {
  const double denom = std::max(z, l);
  if (denom <= 0.0) return es;
  return es * z / denom;
}

Episode::Episode(EpisodeSpec spec, const OccupancyMap& layout, std::shared_ptr<const VisibilityTable> visibility)
    : spec_(std::move(spec)), visibility_(std::move(visibility)) {
  spec_.validate(layout);
  if (!visibility_ || !(visibility_->fov() == spec_.fov) || visibility_->width() != layout.width()) {
    throw SpecError("visibility table does not match the episode layout/fov");
  }
  world_.map = layout;
  world_.map.reset_exploration();
  const std::size_t n = spec_.objects.size();
  world_.object_cells.resize(n);
  for (std::size_t i = 0; i < n; ++i) world_.object_cells[i] = spec_.objects[i].start;
  world_.rearranged.assign(n, 0);
  agent_.pose = spec_.spawn;
  agent_.slots.assign(static_cast<std::size_t>(spec_.capacity), -1);
  agent_.seen.assign(n, 0);
  first_seen_activity_.assign(n, std::nullopt);

  activity_ = Activity::Init;
  std::vector<StepEvent> events = sense();
  update_rearranged(events);
  if (all_rearranged()) status_ = EpisodeStatus::Success;
}

std::vector<StepEvent> Episode::sense() {
  std::vector<StepEvent> events;
  const std::size_t here = world_.map.index(agent_.pose.cell);
  visibility_->visible(here, agent_.pose.heading, scratch_);
  for (std::uint32_t i : scratch_) world_.map.explore(i);
  for (std::size_t id = 0; id < world_.object_cells.size(); ++id) {
    if (agent_.seen[id] || !world_.object_cells[id]) continue;
    const auto idx = static_cast<std::uint32_t>(world_.map.index(*world_.object_cells[id]));
    if (std::binary_search(scratch_.begin(), scratch_.end(), idx)) {
      agent_.seen[id] = 1;
      first_seen_activity_[id] = activity_;
      if (!first_object_path_) first_object_path_ = agent_.path_length;
      events.push_back({EventKind::Seen, static_cast<int>(id)});
    }
  }
  if (!all_seen_path_ && seen_count() == object_count()) all_seen_path_ = agent_.path_length;
  return events;
}

void Episode::update_rearranged(std::vector<StepEvent>& events) {
  for (std::size_t id = 0; id < world_.object_cells.size(); ++id) {
    if (world_.rearranged[id] || !agent_.seen[id] || !world_.object_cells[id]) continue;
    if (*world_.object_cells[id] == spec_.receptacle_of(static_cast<int>(id))) {
      world_.rearranged[id] = 1;
      events.push_back({EventKind::Rearranged, static_cast<int>(id)});
    }
  }
}

void Episode::grab_drop(std::vector<StepEvent>& events) {
  const Cell here = agent_.pose.cell;
  bool dropped = false;
  for (int& slot : agent_.slots) {
    if (slot < 0) continue;
    if (spec_.receptacle_of(slot) != here) continue;
    world_.object_cells[static_cast<std::size_t>(slot)] = here;
    events.push_back({EventKind::Dropped, slot});
    slot = -1;
    dropped = true;
  }
  if (dropped) return;

  if (agent_.held_count() < spec_.capacity) {
    for (std::size_t id = 0; id < world_.object_cells.size(); ++id) {
      if (!agent_.seen[id] || world_.rearranged[id]) continue;
      if (!world_.object_cells[id] || *world_.object_cells[id] != here) continue;
      auto free = std::find(agent_.slots.begin(), agent_.slots.end(), -1);
      *free = static_cast<int>(id);
      world_.object_cells[id].reset();
      events.push_back({EventKind::Grabbed, static_cast<int>(id)});
      return;
    }
  }
  events.push_back({EventKind::Wasted, -1});
}

std::vector<StepEvent> Episode::step(Action action) {
  if (status_ != EpisodeStatus::Running) throw StateError("step after episode termination");
  std::vector<StepEvent> events;
  switch (action) {
    case Action::Forward:
      if (can_move(world_.map, agent_.pose.cell, agent_.pose.heading)) {
        agent_.pose.cell = step_cell(agent_.pose.cell, agent_.pose.heading);
        agent_.path_length += world_.map.resolution() * (is_diagonal(agent_.pose.heading) ? kSqrt2 : 1.0);
        events.push_back({EventKind::Moved, -1});
      } else {
        events.push_back({EventKind::Blocked, -1});
      }
      break;
    case Action::Left:
      agent_.pose.heading = turned_left(agent_.pose.heading);
      events.push_back({EventKind::Turned, -1});
      break;
    case Action::Right:
      agent_.pose.heading = turned_right(agent_.pose.heading);
      events.push_back({EventKind::Turned, -1});
      break;
    case Action::GrabDrop: grab_drop(events); break;
  }
  ++agent_.low_steps;
  for (const StepEvent& e : sense()) events.push_back(e);
  update_rearranged(events);
  log(action, events);
  if (all_rearranged()) {
    status_ = EpisodeStatus::Success;
  } else if (agent_.low_steps >= spec_.low_step_cap) {
    status_ = EpisodeStatus::Timeout;
  }
  return events;
}

EpisodeStatus Episode::check_termination() {
  if (status_ != EpisodeStatus::Running) return status_;
  if (all_rearranged()) {
    status_ = EpisodeStatus::Success;
  } else if (agent_.high_actions >= spec_.max_t || agent_.low_steps >= spec_.low_step_cap) {
    status_ = EpisodeStatus::Timeout;
  }
  return status_;
}

void Episode::begin_high_level_action() {
  if (status_ != EpisodeStatus::Running) throw StateError("high-level action after episode termination");
  ++agent_.high_actions;
}

std::size_t Episode::seen_count() const {
  return static_cast<std::size_t>(std::count(agent_.seen.begin(), agent_.seen.end(), 1));
}

std::size_t Episode::rearranged_count() const {
  return static_cast<std::size_t>(std::count(world_.rearranged.begin(), world_.rearranged.end(), 1));
}

std::vector<int> Episode::pending_objects() const {
  std::vector<int> out;
  for (std::size_t id = 0; id < world_.rearranged.size(); ++id) {
    if (agent_.seen[id] && !world_.rearranged[id]) out.push_back(static_cast<int>(id));
  }
  return out;
}

EpisodeMetrics Episode::compute_metrics(double oracle_z) const {
  if (status_ == EpisodeStatus::Running) throw StateError("compute_metrics called mid-episode");
  if (oracle_z < 0.0) throw PreconditionError("oracle path length must be >= 0");
  EpisodeMetrics m;
  const std::size_t n = object_count();
  m.es = status_ == EpisodeStatus::Success ? 1.0 : 0.0;
  m.ror = n == 0 ? 1.0 : static_cast<double>(rearranged_count()) / static_cast<double>(n);
  m.sor = n == 0 ? 1.0 : static_cast<double>(seen_count()) / static_cast<double>(n);
  m.mc = world_.map.coverage();
  m.espl = espl(m.es, oracle_z, agent_.path_length);
  return m;
}

void Episode::log(Action a, const std::vector<StepEvent>& events) {
  if (!trace_enabled_) return;
  for (const StepEvent& e : events) {
    trace_.push_back({agent_.low_steps, a, agent_.pose, e.kind, e.object});
  }
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "step,action,x,y,heading,event,object\n";
  for (const TraceRow& r : trace) {
    out << r.step << ',' << action_name(r.action) << ',' << r.pose.cell.x << ',' << r.pose.cell.y << ','
        << heading_name(r.pose.heading) << ',' << event_name(r.event) << ',' << r.object << '\n';
  }
}

}  // namespace morp
