#pragma once

// Discrete-event simulator for the duty-cycled uplink.
//
// Receiver cycles have fixed length v_max: an off-segment of (1-delta)*v_max
// followed by an on-segment.  A cycle whose start finds the system busy
// (queue non-empty or a service in progress) skips its off-segment entirely,
// so a service, once started, is never interrupted by the receiver; the only
// preemption source is a higher-priority arrival (preemptive-resume).
//
// Two consequences keep the event loop small:
//   * while the system is busy the receiver is simply on, so cycle
//     boundaries need no events;
//   * while the system is empty the receiver follows the nominal pattern,
//     which is a closed-form function of time, so idle stretches need no
//     events either.  Off-time for the realized duty factor is integrated
//     analytically over those stretches.
//
// Every (class, purpose) pair draws from its own seeded stream and service
// demands are drawn at arrival, so the sample path is a pure function of
// (config, options) and summaries are bit-identical across runs.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "usam/analytic.hpp"
#include "usam/model.hpp"
#include "usam/rng.hpp"

namespace usam {


struct SimOptions {
  double rho = 0.1;
  double delta = 0.3;
  double horizon_ms = 60000.0;
  double warmup_frac = 0.05;
  std::uint64_t seed = 1;
  bool record_packets = false;     // keep per-packet records for dumps/replay
  bool exponential_service = false;  // validation-only service model
  std::size_t max_exceed_traces = 64;
};

struct PacketRecord {
  Cls cls;
  double t_arrival;
  double v_activation;  // arrival to next receiver readiness
  double w_queue;       // everything between readiness and completion that
                        // is not the packet's own service
  double service;
  double t_start;       // first moment of service
  double t_done;
};

struct PendingRecord {  // undelivered at the horizon
  Cls cls;
  double t_arrival;
  double service;
};

struct ClassStats {
  std::uint64_t n_delivered = 0;
  double wq_mean = kNaN;
  double t_mean = kNaN;
  double t_max = kNaN;
  double viol_rate = kNaN;         // fraction with response above the deadline
  std::uint64_t n_bound_exceed = 0;  // responses above the wcrt bound
  // Ages; NaN unless the class is monitored and delivered inside the window.
  double aoi_mean = kNaN;
  double paoi_mean = kNaN;
  double aos_mean = kNaN;
};

struct SimSummary {
  std::array<ClassStats, kNumCls> cls{};
  std::uint64_t n_delivered_total = 0;
  double wq_mean_ms = kNaN;   // pooled over all delivered packets
  double t_max_ms = kNaN;
  double aoi_ms = kNaN;       // worst (max) across monitoring classes
  double paoi_ms = kNaN;
  double aos_ms = kNaN;
  double realized_duty = kNaN;
  double horizon_ms = 0.0;
  double warmup_ms = 0.0;
  std::uint64_t seed = 0;
  bool unstable = false;
};

struct RunResult {
  SimSummary summary;
  std::vector<PacketRecord> delivered;   // only when record_packets
  std::vector<PendingRecord> pending;    // only when record_packets
  std::vector<PacketRecord> exceedances;  // responses above the wcrt bound
};

// Receiver readiness under the skip rule.  forced_on_until covers both a
// busy system (infinity) and the tail of the cycle in which the system last
// emptied; beyond it the nominal pattern applies.
class Receiver {
 public:
  Receiver(double v_max, double delta)
      : v_(v_max), off_(v_max * (1.0 - delta)) {}

  double cycle_end(double t) const { return (std::floor(t / v_) + 1.0) * v_; }

  void note_busy() { forced_on_until_ = kInf; }
  void note_empty(double t) { forced_on_until_ = cycle_end(t); }

  bool ready(double t) const {
    if (t < forced_on_until_) return true;
    if (off_ <= 0.0) return true;
    return phase(t) >= off_;
  }

  double next_ready(double t) const {
    if (ready(t)) return t;
    return std::floor(t / v_) * v_ + off_;
  }

  // Off-time of the nominal pattern in [0, t), cycles aligned at 0.
  double pattern_off_measure(double t) const {
    if (off_ <= 0.0 || t <= 0.0) return 0.0;
    double n = std::floor(t / v_);
    return n * off_ + std::min(off_, t - n * v_);
  }

 private:
  double phase(double t) const { return t - std::floor(t / v_) * v_; }

  double v_;
  double off_;
  double forced_on_until_ = 0.0;  // nominal pattern applies from t = 0
};

// Streaming piecewise-linear integrator for the three age processes of one
// monitored class.  A virtual synchronisation at t = 0 anchors the age of
// the latest delivered update before the first real delivery; the stats
// window [w, horizon) discards the transient anyway.
class AgeTracker {
 public:
  explicit AgeTracker(double window_start) : w_(window_start) {}

  void on_generate(double t) {
    advance(t);
    undelivered_.push_back(t);
  }

  void on_deliver(double t, double gen) {
    advance(t);
    if (t >= w_) {
      paoi_sum_ += t - latest_gen_;
      ++paoi_n_;
    }
    latest_gen_ = gen;
    assert(!undelivered_.empty() && undelivered_.front() == gen);
    undelivered_.pop_front();
  }

  void finalize(double horizon) { advance(horizon); }

  double aoi_mean(double horizon) const {
    return paoi_n_ == 0 ? kNaN : aoi_int_ / (horizon - w_);
  }
  double paoi_mean() const { return paoi_n_ == 0 ? kNaN : paoi_sum_ / paoi_n_; }
  double aos_mean(double horizon) const {
    return paoi_n_ == 0 ? kNaN : aos_int_ / (horizon - w_);
  }

 private:
  void advance(double t) {
    double a = std::max(last_t_, w_);
    if (t > a) {
      aoi_int_ += ((t - latest_gen_) * (t - latest_gen_) -
                   (a - latest_gen_) * (a - latest_gen_)) / 2.0;
      if (!undelivered_.empty()) {
        double u = undelivered_.front();
        double b = std::max(a, u);
        if (t > b) aos_int_ += ((t - u) * (t - u) - (b - u) * (b - u)) / 2.0;
      }
    }
    last_t_ = std::max(last_t_, t);
  }

  double w_;
  double last_t_ = 0.0;
  double latest_gen_ = 0.0;
  std::deque<double> undelivered_;
  double aoi_int_ = 0.0;
  double aos_int_ = 0.0;
  double paoi_sum_ = 0.0;
  std::uint64_t paoi_n_ = 0;
};

// Service demand in ms for one packet of class k.
inline double sample_service(const SystemConfig& cfg, Cls k, Stream& stream,
                             bool exponential_service) {
  if (exponential_service)  // mean 1/mu, unbounded support; validation only
    return stream.exponential(cfg.mu / kMsPerSec);
  return stream.uniform(cfg.s_min_ms, cfg.spec(k).c_max_ms);
}

namespace detail {

struct Job {
  Cls cls;
  double t_arrival;
  double demand;
  double remaining;
  double v_activation;
  double t_start = kNaN;
};

inline double nan_max(double a, double b) {
  if (std::isnan(a)) return b;
  if (std::isnan(b)) return a;
  return std::max(a, b);
}

}  // namespace detail

inline RunResult run(const SystemConfig& cfg, const SimOptions& opts) {
  using detail::Job;
  if (!(opts.delta > 0.0 && opts.delta <= 1.0))
    throw std::domain_error("delta must lie in (0,1]");
  if (!(opts.horizon_ms > 0.0))
    throw std::domain_error("horizon_ms must be positive");
  if (!(opts.warmup_frac >= 0.0 && opts.warmup_frac < 1.0))
    throw std::domain_error("warmup_frac must lie in [0,1)");

  const double H = opts.horizon_ms;
  const double W = opts.warmup_frac * H;
  const auto lam_s = arrival_rates(cfg, opts.rho);  // validates rho, 1/s

  std::array<Stream, kNumCls> arr_stream, svc_stream;
  std::array<double, kNumCls> lam_ms{};
  std::array<double, kNumCls> next_arrival{};
  std::array<double, kNumCls> bound_ms{};
  std::array<int, kNumCls> prio{};
  for (int k = 0; k < kNumCls; ++k) {
    arr_stream[k] = Stream(opts.seed, k, Purpose::Arrival);
    svc_stream[k] = Stream(opts.seed, k, Purpose::Service);
    lam_ms[k] = lam_s[k] / kMsPerSec;
    next_arrival[k] = lam_ms[k] > 0.0 ? arr_stream[k].exponential(lam_ms[k]) : kInf;
    bound_ms[k] = wcrt_bound(cfg, kAllCls[k], opts.delta);
    prio[k] = cfg.classes[k].priority;
  }

  // Class indices in service order: higher priority first, then name order
  // (the latter is unreachable while priorities are distinct, but keeps the
  // scan deterministic regardless).
  std::array<int, kNumCls> by_prio{0, 1, 2, 3};
  std::stable_sort(by_prio.begin(), by_prio.end(),
                   [&](int a, int b) { return prio[a] > prio[b]; });

  Receiver recv(cfg.v_max_ms, opts.delta);
  std::array<std::deque<Job>, kNumCls> queue;
  std::optional<Job> serving;
  double seg_start = 0.0;       // start of the current service segment
  double activation_at = kInf;  // pending off->on wake-up, if any

  bool pattern_open = true;     // nominal pattern governs from t = 0
  double pattern_from = 0.0;
  double off_accum = 0.0;

  std::vector<AgeTracker> ages;
  std::array<int, kNumCls> age_of{};
  age_of.fill(-1);
  for (Cls c : cfg.monitoring()) {
    age_of[idx(c)] = static_cast<int>(ages.size());
    ages.emplace_back(W);
  }

  struct Accum {
    std::uint64_t n = 0, viols = 0, exceed = 0;
    double wq_sum = 0.0, t_sum = 0.0, t_max = kNaN;
  };
  std::array<Accum, kNumCls> acc{};
  RunResult out;

  auto close_pattern = [&](double t) {
    if (!pattern_open) return;
    pattern_open = false;
    double a = std::max(pattern_from, W);
    double b = std::min(t, H);
    if (b > a)
      off_accum += recv.pattern_off_measure(b) - recv.pattern_off_measure(a);
  };

  auto start_service = [&](Job job, double t) {
    if (std::isnan(job.t_start)) job.t_start = t;
    serving = job;
    seg_start = t;
    recv.note_busy();
  };

  auto total_queued = [&] {
    std::size_t n = 0;
    for (const auto& q : queue) n += q.size();
    return n;
  };

  while (true) {
    // Next event: completion wins ties, then activation, then arrivals
    // (among simultaneous arrivals the higher priority goes first).
    double t_complete = serving ? seg_start + serving->remaining : kInf;
    double t_next = t_complete;
    int kind = 0;  // 0 completion, 1 activation, 2 arrival
    int arr_k = -1;
    if (activation_at < t_next) {
      t_next = activation_at;
      kind = 1;
    }
    for (int i : by_prio) {
      if (next_arrival[i] < t_next) {
        t_next = next_arrival[i];
        kind = 2;
        arr_k = i;
      }
    }
    if (t_next > H) break;

    if (kind == 0) {
      const double t = t_complete;
      Job job = *serving;
      serving.reset();
      job.remaining = 0.0;
      const int k = idx(job.cls);
      const double wq =
          std::max(0.0, t - job.t_arrival - job.v_activation - job.demand);
      const double resp = t - job.t_arrival;
      if (t >= W) {
        auto& a = acc[k];
        ++a.n;
        a.wq_sum += wq;
        a.t_sum += resp;
        a.t_max = detail::nan_max(a.t_max, resp);
        if (resp > cfg.classes[k].deadline_ms) ++a.viols;
        if (resp > bound_ms[k]) {
          ++a.exceed;
          if (out.exceedances.size() < opts.max_exceed_traces)
            out.exceedances.push_back({job.cls, job.t_arrival, job.v_activation,
                                       wq, job.demand, job.t_start, t});
        }
      }
      if (opts.record_packets)
        out.delivered.push_back({job.cls, job.t_arrival, job.v_activation, wq,
                                 job.demand, job.t_start, t});
      if (age_of[k] >= 0) ages[age_of[k]].on_deliver(t, job.t_arrival);

      bool started = false;
      for (int i : by_prio) {
        if (!queue[i].empty()) {
          Job nxt = queue[i].front();
          queue[i].pop_front();
          start_service(nxt, t);
          started = true;
          break;
        }
      }
      if (!started) {
        recv.note_empty(t);
        pattern_open = true;
        pattern_from = recv.cycle_end(t);
      }
    } else if (kind == 1) {
      const double t = activation_at;
      activation_at = kInf;
      close_pattern(t);
      for (int i : by_prio) {
        if (!queue[i].empty()) {
          Job nxt = queue[i].front();
          queue[i].pop_front();
          start_service(nxt, t);
          break;
        }
      }
      assert(serving);
    } else {
      const int k = arr_k;
      const double t = next_arrival[k];
      next_arrival[k] = t + arr_stream[k].exponential(lam_ms[k]);
      Job job;
      job.cls = kAllCls[k];
      job.t_arrival = t;
      job.demand = sample_service(cfg, job.cls, svc_stream[k],
                                  opts.exponential_service);
      job.remaining = job.demand;
      job.v_activation = 0.0;
      if (age_of[k] >= 0) ages[age_of[k]].on_generate(t);

      if (serving) {
        if (prio[k] > prio[idx(serving->cls)]) {
          Job cur = *serving;
          cur.remaining -= t - seg_start;
          queue[idx(cur.cls)].push_front(cur);
          start_service(job, t);
        } else {
          queue[k].push_back(job);
        }
      } else if (recv.ready(t)) {
        assert(total_queued() == 0);  // work conservation
        close_pattern(t);
        start_service(job, t);
      } else {
        double r = recv.next_ready(t);
        job.v_activation = r - t;
        queue[k].push_back(job);
        activation_at = r;
      }
    }
  }

  // Horizon: close the books; whatever is still in the system goes to the
  // pending list rather than into the delivery statistics.
  close_pattern(H);
  if (opts.record_packets) {
    if (serving)
      out.pending.push_back({serving->cls, serving->t_arrival, serving->demand});
    for (int i : by_prio)
      for (const auto& j : queue[i])
        out.pending.push_back({j.cls, j.t_arrival, j.demand});
  }
  for (auto& tr : ages) tr.finalize(H);

  SimSummary& s = out.summary;
  s.horizon_ms = H;
  s.warmup_ms = W;
  s.seed = opts.seed;
  double lam_total_ms = 0.0;
  for (double v : lam_ms) lam_total_ms += v;
  s.unstable = lam_total_ms > 0.0 &&
               lam_total_ms >= cfg.mu / kMsPerSec * opts.delta;

  std::uint64_t n_total = 0;
  double wq_total = 0.0;
  for (int k = 0; k < kNumCls; ++k) {
    const auto& a = acc[k];
    auto& c = s.cls[k];
    c.n_delivered = a.n;
    c.n_bound_exceed = a.exceed;
    if (a.n > 0) {
      c.wq_mean = a.wq_sum / a.n;
      c.t_mean = a.t_sum / a.n;
      c.t_max = a.t_max;
      c.viol_rate = static_cast<double>(a.viols) / a.n;
    }
    if (age_of[k] >= 0) {
      const auto& tr = ages[age_of[k]];
      c.aoi_mean = tr.aoi_mean(H);
      c.paoi_mean = tr.paoi_mean();
      c.aos_mean = tr.aos_mean(H);
      s.aoi_ms = detail::nan_max(s.aoi_ms, c.aoi_mean);
      s.paoi_ms = detail::nan_max(s.paoi_ms, c.paoi_mean);
      s.aos_ms = detail::nan_max(s.aos_ms, c.aos_mean);
    }
    s.t_max_ms = detail::nan_max(s.t_max_ms, c.t_max);
    n_total += a.n;
    wq_total += a.wq_sum;
  }
  s.n_delivered_total = n_total;
  if (n_total > 0) s.wq_mean_ms = wq_total / n_total;
  s.realized_duty = 1.0 - off_accum / (H - W);
  return out;
}

// Event-log dump, one line per delivered packet.
inline void write_event_log(const std::string& path,
                            const std::vector<PacketRecord>& records) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open event log for writing: " + path);
  f << "class,t_arrival,v_activation,w_queue,service,t_done\n";
  char line[160];
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%s,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  name(r.cls), r.t_arrival, r.v_activation, r.w_queue,
                  r.service, r.t_done);
    f << line;
  }
  if (!f.good()) throw std::runtime_error("failed writing event log: " + path);
}

struct ReplicateResult {
  SimSummary agg;  // pooled per-packet stats, averaged time stats
  int n_reps = 0;
  std::vector<SimSummary> reps;
  // 95% normal half-widths across replications (NaN when n_reps < 2).
  double ci_wq_mean = kNaN;
  double ci_aoi = kNaN, ci_paoi = kNaN, ci_aos = kNaN;
  double ci_duty = kNaN;
  std::array<double, kNumCls> ci_viol{kNaN, kNaN, kNaN, kNaN};
  std::vector<PacketRecord> exceedances;
};

namespace detail {

inline double ci_halfwidth(const std::vector<double>& xs) {
  std::vector<double> v;
  for (double x : xs)
    if (!std::isnan(x)) v.push_back(x);
  if (v.size() < 2) return kNaN;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  double sd = std::sqrt(ss / (v.size() - 1));
  return 1.96 * sd / std::sqrt(static_cast<double>(v.size()));
}

inline double nan_mean(const std::vector<double>& xs) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double x : xs)
    if (!std::isnan(x)) {
      sum += x;
      ++n;
    }
  return n == 0 ? kNaN : sum / n;
}

}  // namespace detail

// Runs n_reps independent replications with seeds base, base+1, ...  The
// replications are independent by construction, so the aggregate does not
// depend on execution order; they run sequentially here.
inline ReplicateResult replicate(const SystemConfig& cfg, const SimOptions& base,
                                 int n_reps) {
  if (n_reps < 1) throw std::domain_error("n_reps must be >= 1");
  ReplicateResult out;
  out.n_reps = n_reps;
  out.reps.reserve(n_reps);
  // Replications run concurrently; seeds are fixed per index and results are
  // collected in index order, so the aggregate is schedule-independent.
  std::vector<std::future<RunResult>> futs;
  futs.reserve(n_reps);
  for (int i = 0; i < n_reps; ++i) {
    SimOptions o = base;
    o.seed = base.seed + static_cast<std::uint64_t>(i);
    futs.push_back(std::async(std::launch::async,
                              [&cfg, o] { return run(cfg, o); }));
  }
  for (auto& f : futs) {
    RunResult r = f.get();
    for (const auto& e : r.exceedances)
      if (out.exceedances.size() < base.max_exceed_traces)
        out.exceedances.push_back(e);
    out.reps.push_back(std::move(r.summary));
  }

  SimSummary& agg = out.agg;
  agg.horizon_ms = base.horizon_ms;
  agg.warmup_ms = base.warmup_frac * base.horizon_ms;
  agg.seed = base.seed;

  std::uint64_t n_total = 0;
  double wq_total = 0.0;
  for (int k = 0; k < kNumCls; ++k) {
    std::uint64_t n = 0, exceed = 0;
    double wq_sum = 0.0, t_sum = 0.0, viol_sum = 0.0, t_max = kNaN;
    std::vector<double> aois, paois, aoss;
    for (const auto& r : out.reps) {
      const auto& c = r.cls[k];
      n += c.n_delivered;
      exceed += c.n_bound_exceed;
      if (c.n_delivered > 0) {
        wq_sum += c.wq_mean * c.n_delivered;
        t_sum += c.t_mean * c.n_delivered;
        viol_sum += c.viol_rate * c.n_delivered;
        t_max = detail::nan_max(t_max, c.t_max);
      }
      aois.push_back(c.aoi_mean);
      paois.push_back(c.paoi_mean);
      aoss.push_back(c.aos_mean);
    }
    auto& c = agg.cls[k];
    c.n_delivered = n;
    c.n_bound_exceed = exceed;
    if (n > 0) {
      c.wq_mean = wq_sum / n;
      c.t_mean = t_sum / n;
      c.t_max = t_max;
      c.viol_rate = viol_sum / n;
    }
    c.aoi_mean = detail::nan_mean(aois);
    c.paoi_mean = detail::nan_mean(paois);
    c.aos_mean = detail::nan_mean(aoss);
    if (cfg.classes[k].is_monitoring) {
      agg.aoi_ms = detail::nan_max(agg.aoi_ms, c.aoi_mean);
      agg.paoi_ms = detail::nan_max(agg.paoi_ms, c.paoi_mean);
      agg.aos_ms = detail::nan_max(agg.aos_ms, c.aos_mean);
    }
    agg.t_max_ms = detail::nan_max(agg.t_max_ms, c.t_max);
    n_total += n;
    wq_total += wq_sum;
  }
  agg.n_delivered_total = n_total;
  if (n_total > 0) agg.wq_mean_ms = wq_total / n_total;

  std::vector<double> wqs, duties, aois, paois, aoss;
  std::array<std::vector<double>, kNumCls> viols;
  for (const auto& r : out.reps) {
    wqs.push_back(r.wq_mean_ms);
    duties.push_back(r.realized_duty);
    aois.push_back(r.aoi_ms);
    paois.push_back(r.paoi_ms);
    aoss.push_back(r.aos_ms);
    for (int k = 0; k < kNumCls; ++k) viols[k].push_back(r.cls[k].viol_rate);
    agg.unstable = agg.unstable || r.unstable;
  }
  agg.realized_duty = detail::nan_mean(duties);
  out.ci_wq_mean = detail::ci_halfwidth(wqs);
  out.ci_duty = detail::ci_halfwidth(duties);
  out.ci_aoi = detail::ci_halfwidth(aois);
  out.ci_paoi = detail::ci_halfwidth(paois);
  out.ci_aos = detail::ci_halfwidth(aoss);
  for (int k = 0; k < kNumCls; ++k) out.ci_viol[k] = detail::ci_halfwidth(viols[k]);
  return out;
}

}  // namespace usam
