#include "soqn/simulator.hpp"

#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "soqn/error.hpp"
#include "soqn/parallel_for.hpp"
#include "soqn/random.hpp"

namespace soqn {

void validate(const SimConfig& config) {
  const ValidationResult v = validate_model(config.model);
  if (!v) {
    throw ConfigError("invalid model: " + v.summary());
  }
  if (config.pick_labels.empty()) {
    throw ConfigError("simulation: no picking stations given");
  }
  for (const auto& label : config.pick_labels) {
    if (!config.model.inner.find(label)) {
      throw ConfigError(fmt::format("simulation: picking station '{}' not found", label));
    }
  }
  if (!(config.horizon_s > 0.0) || !std::isfinite(config.horizon_s)) {
    throw ConfigError(fmt::format("horizon_s must be finite and > 0 (got {})", config.horizon_s));
  }
  if (!(config.warmup_s >= 0.0 && config.warmup_s < config.horizon_s)) {
    throw ConfigError(fmt::format("warmup_s must lie in [0, horizon_s) (got {})", config.warmup_s));
  }
  if (config.replications < 1) {
    throw ConfigError(fmt::format("replications must be >= 1 (got {})", config.replications));
  }
}

namespace {

enum class EventKind : std::uint8_t { Arrival, Departure };

struct Event {
  double time;
  std::uint64_t seq;
  EventKind kind;
  std::uint32_t station;
  std::uint32_t robot;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return a.time != b.time ? a.time > b.time : a.seq > b.seq;
  }
};

struct Robot {
  double task_arrival = 0.0;
  double dispatched = 0.0;
  bool picked = false;
};

// Cumulative routing rows with their positive targets, for sampling.
struct RouteTable {
  std::vector<std::vector<std::uint32_t>> targets;
  std::vector<std::vector<double>> cumulative;

  explicit RouteTable(const RoutingMatrix& r) : targets(r.size()), cumulative(r.size()) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (r(i, j) > 0.0) {
          acc += r(i, j);
          targets[i].push_back(static_cast<std::uint32_t>(j));
          cumulative[i].push_back(acc);
        }
      }
      cumulative[i].back() = std::numeric_limits<double>::infinity();
    }
  }

  std::uint32_t sample(std::size_t from, double u) const {
    const auto& cum = cumulative[from];
    std::size_t k = 0;
    while (u >= cum[k]) {
      ++k;
    }
    return targets[from][k];
  }
};

class Replication {
 public:
  Replication(const SimConfig& config, int replication)
      : cfg_(config),
        inner_(config.model.inner),
        routes_(inner_.routing()),
        stations_(inner_.size() + 1),
        robots_(static_cast<std::size_t>(config.model.pool_size)),
        count_(stations_, 0),
        fcfs_(stations_),
        is_pick_(stations_, false),
        area_(stations_, 0.0) {
    const std::uint64_t key = split_key(config.seed, static_cast<std::uint64_t>(replication));
    arrivals_ = CounterRng(split_key(key, 0));
    routing_ = CounterRng(split_key(key, 1));
    for (std::size_t j = 0; j < stations_; ++j) {
      service_.emplace_back(split_key(key, 2 + j));
    }
    for (const auto& label : config.pick_labels) {
      is_pick_[*inner_.find(label)] = true;
    }
    for (std::size_t r = 0; r < robots_.size(); ++r) {
      idle_.push_back(static_cast<std::uint32_t>(robots_.size() - 1 - r));
    }
    count_[0] = config.model.pool_size;
  }

  SimStats run() {
    schedule(arrivals_.exponential(cfg_.model.arrival_rate), EventKind::Arrival, 0, 0);
    while (!events_.empty() && events_.top().time <= cfg_.horizon_s) {
      const Event e = events_.top();
      events_.pop();
      advance(e.time);
      if (e.kind == EventKind::Arrival) {
        on_arrival(e.time);
      } else {
        on_departure(e.time, e.station, e.robot);
      }
      if (cfg_.check_invariants) {
        check_invariants();
      }
    }
    advance(cfg_.horizon_s);
    return collect();
  }

 private:
  void schedule(double time, EventKind kind, std::size_t station, std::uint32_t robot) {
    events_.push(Event{time, seq_++, kind, static_cast<std::uint32_t>(station), robot});
  }

  // Accumulates time-weighted occupancy over the part of (now, t] that lies
  // inside the observation window.
  void advance(double t) {
    const double from = std::max(now_, cfg_.warmup_s);
    const double to = std::min(t, cfg_.horizon_s);
    if (to > from) {
      const double dt = to - from;
      for (std::size_t j = 0; j < stations_; ++j) {
        area_[j] += count_[j] * dt;
      }
      queue_area_ += static_cast<double>(backlog_.size()) * dt;
    }
    now_ = t;
  }

  void on_arrival(double t) {
    schedule(t + arrivals_.exponential(cfg_.model.arrival_rate), EventKind::Arrival, 0, 0);
    if (!idle_.empty()) {
      const std::uint32_t r = idle_.back();
      idle_.pop_back();
      --count_[0];
      dispatch(t, r, t);
    } else {
      backlog_.push_back(t);
    }
  }

  void dispatch(double t, std::uint32_t r, double task_arrival) {
    robots_[r] = Robot{task_arrival, t, false};
    enter(t, routes_.sample(0, routing_.uniform()), r);
  }

  void enter(double t, std::size_t station, std::uint32_t r) {
    ++count_[station];
    const NodeSpec& node = inner_.node(station);
    if (node.is_fcfs()) {
      fcfs_[station].push_back(r);
      if (fcfs_[station].size() == 1) {
        schedule(t + service_[station].exponential(node.rate), EventKind::Departure, station, r);
      }
    } else {
      schedule(t + service_[station].exponential(node.rate), EventKind::Departure, station, r);
    }
  }

  void on_departure(double t, std::size_t station, std::uint32_t r) {
    --count_[station];
    const NodeSpec& node = inner_.node(station);
    if (node.is_fcfs()) {
      auto& line = fcfs_[station];
      line.pop_front();
      if (!line.empty()) {
        schedule(t + service_[station].exponential(node.rate), EventKind::Departure, station,
                 line.front());
      }
    }
    Robot& robot = robots_[r];
    if (is_pick_[station] && !robot.picked) {
      robot.picked = true;
      record(robot, t);
    }

    const std::uint32_t next = routes_.sample(station, routing_.uniform());
    if (next != 0) {
      enter(t, next, r);
      return;
    }
    if (!backlog_.empty()) {
      const double task_arrival = backlog_.front();
      backlog_.pop_front();
      dispatch(t, r, task_arrival);
    } else {
      idle_.push_back(r);
      ++count_[0];
    }
  }

  void record(const Robot& robot, double t) {
    if (robot.task_arrival < cfg_.warmup_s) {
      return;
    }
    ++completed_;
    wait_sum_ += robot.dispatched - robot.task_arrival;
    inner_sum_ += t - robot.dispatched;
    turnover_sum_ += t - robot.task_arrival;
  }

  void check_invariants() const {
    long total = 0;
    for (long c : count_) {
      total += c;
    }
    if (total != cfg_.model.pool_size) {
      throw std::logic_error(fmt::format("robot conservation violated at t={}: {} robots", now_,
                                         total));
    }
    if (!backlog_.empty() && count_[0] != 0) {
      throw std::logic_error(
          fmt::format("external queue nonempty while {} robots idle at t={}", count_[0], now_));
    }
  }

  SimStats collect() const {
    SimStats s;
    const double window = cfg_.horizon_s - cfg_.warmup_s;
    s.completed_tasks = completed_;
    if (completed_ > 0) {
      const auto n = static_cast<double>(completed_);
      s.mean_external_wait_s = wait_sum_ / n;
      s.mean_inner_processing_s = inner_sum_ / n;
      s.mean_turnover_s = turnover_sum_ / n;
    }
    for (std::size_t j = 1; j < stations_; ++j) {
      s.per_node_mean_queue.emplace_back(inner_.node(j).label, area_[j] / window);
    }
    s.mean_external_queue = queue_area_ / window;
    s.robot_utilization = 1.0 - area_[0] / (window * cfg_.model.pool_size);
    s.task_throughput = static_cast<double>(completed_) / window;
    s.near_instability = s.robot_utilization > kNearInstabilityUtilization;
    return s;
  }

  const SimConfig& cfg_;
  const InnerNetwork& inner_;
  RouteTable routes_;
  std::size_t stations_;

  CounterRng arrivals_;
  CounterRng routing_;
  std::vector<CounterRng> service_;

  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;

  std::vector<Robot> robots_;
  std::vector<long> count_;  // count_[0] = idle robots in the pool
  std::vector<std::deque<std::uint32_t>> fcfs_;
  std::vector<std::uint32_t> idle_;
  std::deque<double> backlog_;  // arrival times of tasks waiting for a robot
  std::vector<bool> is_pick_;

  std::vector<double> area_;
  double queue_area_ = 0.0;
  std::int64_t completed_ = 0;
  double wait_sum_ = 0.0;
  double inner_sum_ = 0.0;
  double turnover_sum_ = 0.0;
};

Estimate estimate(std::span<const double> values) {
  Estimate e;
  const auto n = values.size();
  if (n == 0) {
    return e;
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  e.mean = sum / static_cast<double>(n);
  if (n >= 2) {
    double ss = 0.0;
    for (double v : values) {
      ss += (v - e.mean) * (v - e.mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const boost::math::students_t dist(static_cast<double>(n - 1));
    e.half_width = boost::math::quantile(dist, 0.975) * sd / std::sqrt(static_cast<double>(n));
  }
  return e;
}

template <typename Field>
Estimate estimate_of(std::span<const SimStats> runs, Field field) {
  std::vector<double> values;
  values.reserve(runs.size());
  for (const auto& r : runs) {
    values.push_back(static_cast<double>(field(r)));
  }
  return estimate(values);
}

}  // namespace

SimStats simulate(const SimConfig& config, int replication) {
  validate(config);
  return Replication(config, replication).run();
}

std::vector<SimStats> run_replications(const SimConfig& config, Execution execution) {
  validate(config);
  const int reps = config.replications;
  std::vector<SimStats> runs(static_cast<std::size_t>(reps));

  parallel_for(runs.size(), execution, [&](std::size_t r) {
    runs[r] = Replication(config, static_cast<int>(r)).run();
  });
  return runs;
}

ReplicationSummary summarize(std::span<const SimStats> runs) {
  ReplicationSummary s;
  s.replications = static_cast<int>(runs.size());
  if (runs.empty()) {
    return s;
  }
  s.external_wait_s = estimate_of(runs, [](const SimStats& r) { return r.mean_external_wait_s; });
  s.turnover_s = estimate_of(runs, [](const SimStats& r) { return r.mean_turnover_s; });
  s.inner_processing_s =
      estimate_of(runs, [](const SimStats& r) { return r.mean_inner_processing_s; });
  s.robot_utilization = estimate_of(runs, [](const SimStats& r) { return r.robot_utilization; });
  s.task_throughput = estimate_of(runs, [](const SimStats& r) { return r.task_throughput; });
  s.completed_tasks = estimate_of(runs, [](const SimStats& r) { return r.completed_tasks; });
  for (std::size_t j = 0; j < runs.front().per_node_mean_queue.size(); ++j) {
    s.per_node_mean_queue.emplace_back(
        runs.front().per_node_mean_queue[j].first,
        estimate_of(runs, [j](const SimStats& r) { return r.per_node_mean_queue[j].second; }));
  }
  for (const auto& r : runs) {
    s.near_instability = s.near_instability || r.near_instability;
  }
  return s;
}

ReplicationSummary replicate(const SimConfig& config, Execution execution) {
  const std::vector<SimStats> runs = run_replications(config, execution);
  return summarize(runs);
}

}  // namespace soqn
