#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <vector>

#include "qoinet/policy.hpp"
#include "qoinet/sampling.hpp"

using namespace qoinet;

namespace {

// Reference minimizers by exhaustive search; ties go to the smaller value.
std::int64_t brute_route(std::int64_t K, std::int64_t X, std::int64_t smax) {
  std::int64_t best = 0, best_g = K * K + X * X;
  for (std::int64_t s = 1; s <= smax; ++s) {
    std::int64_t g = (K - s) * (K - s) + (X + s) * (X + s);
    if (g < best_g) {
      best = s;
      best_g = g;
    }
  }
  return best;
}

int brute_format(std::int64_t K, const std::vector<FormatOption>& opts,
                 double V) {
  int best = 0;
  double best_obj = 0.0;
  for (int f = 0; f < static_cast<int>(opts.size()); ++f) {
    double kd = static_cast<double>(K + opts[f].data);
    double obj = kd * kd - 2.0 * V * opts[f].reward;
    if (f == 0 || obj < best_obj) {
      best = f;
      best_obj = obj;
    }
  }
  return best;
}

std::int64_t brute_closest(std::int64_t Q, std::int64_t best_rate) {
  std::int64_t best = 0, best_g = Q * Q;
  for (std::int64_t u = 1; u <= best_rate; ++u) {
    std::int64_t g = (Q - u) * (Q - u);
    if (g < best_g) {
      best = u;
      best_g = g;
    }
  }
  return best;
}

std::int64_t brute_relay(std::int64_t J, std::int64_t Qm, std::int64_t best_rate) {
  std::int64_t best = 0, best_g = J * J + Qm * Qm;
  for (std::int64_t a = 1; a <= best_rate; ++a) {
    std::int64_t g = (J - a) * (J - a) + (Qm + a) * (Qm + a);
    if (g < best_g) {
      best = a;
      best_g = g;
    }
  }
  return best;
}

const std::vector<FormatOption> kFormats = {
    {0.0, 0}, {20.0, 100}, {15.0, 50}, {10.0, 10}};

}  // namespace

TEST_CASE("format selection matches exhaustive evaluation") {
  CHECK(brute_format(0, kFormats, 800.0) == 1);
  CHECK(qd_select_format(0, kFormats, 800.0) == 1);

  // Objective for f=3 at K=800 is 640100, barely losing to K^2 = 640000.
  CHECK(brute_format(800, kFormats, 800.0) == 0);
  CHECK(qd_select_format(800, kFormats, 800.0) == 0);

  std::vector<FormatOption> blanks(4);
  CHECK(qd_select_format(123, blanks, 800.0) == 0);

  for (std::int64_t K = 0; K <= 1200; K += 7)
    for (double V : {0.0, 10.0, 400.0, 800.0})
      CHECK(qd_select_format(K, kFormats, V) == brute_format(K, kFormats, V));
}

TEST_CASE("format data is non-increasing in the input backlog") {
  std::int64_t prev = kFormats[qd_select_format(0, kFormats, 800.0)].data;
  for (std::int64_t K = 1; K <= 1000; ++K) {
    std::int64_t d = kFormats[qd_select_format(K, kFormats, 800.0)].data;
    CHECK(d <= prev);
    prev = d;
  }
}

TEST_CASE("uplink routing closed form") {
  CHECK(qd_route_uplink(10, 0, 30) == 5);
  CHECK(brute_route(10, 0, 30) == 5);
  CHECK(qd_route_uplink(4, 9, 30) == 0);
  CHECK(qd_route_uplink(9, 9, 30) == 0);
  CHECK(qd_route_uplink(100, 0, 30) == 30);
  CHECK(brute_route(100, 0, 30) == 30);

  for (std::int64_t K = 0; K <= 80; ++K)
    for (std::int64_t Q = 0; Q <= 80; Q += 3)
      for (std::int64_t smax : {0, 1, 5, 30})
        CHECK(qd_route_uplink(K, Q, smax) == brute_route(K, Q, smax));
}

TEST_CASE("uplink routing stays within 1 of the clamped midpoint") {
  for (std::int64_t K = 0; K <= 120; ++K) {
    for (std::int64_t Q = 0; Q <= 60; Q += 2) {
      double mid = static_cast<double>(K - Q) / 2.0;
      double clamped = std::max(0.0, std::min(mid, 30.0));
      CHECK(std::abs(static_cast<double>(qd_route_uplink(K, Q, 30)) - clamped) <=
            1.0);
    }
  }
}

TEST_CASE("relay routing closed form") {
  // g(2) = g(3) = 41; the tie resolves to the smaller shift.
  CHECK(qd_route_relay(7, 2, 30) == 2);
  CHECK(brute_route(7, 2, 30) == 2);
  CHECK(qd_route_relay(0, 0, 30) == 0);
  CHECK(qd_route_relay(61, 0, 30) == 30);
  CHECK(brute_route(61, 0, 30) == 30);

  for (std::int64_t K = 0; K <= 70; ++K)
    for (std::int64_t J = 0; J <= 70; J += 5)
      CHECK(qd_route_relay(K, J, 11) == brute_route(K, J, 11));
}

TEST_CASE("uplink allocation picks the closest feasible rate") {
  CHECK(qd_allocate_uplink(7, 10) == 7);
  CHECK(qd_allocate_uplink(25, 10) == 10);
  CHECK(qd_allocate_uplink(0, 10) == 0);
  for (std::int64_t Q = 0; Q <= 40; ++Q)
    for (std::int64_t best = 0; best <= 12; ++best)
      CHECK(qd_allocate_uplink(Q, best) == brute_closest(Q, best));
}

TEST_CASE("relay allocation closed form") {
  CHECK(qd_allocate_relay(10, 2, 4) == 4);
  CHECK(brute_relay(10, 2, 4) == 4);
  CHECK(qd_allocate_relay(3, 9, 10) == 0);
  // g(3) = g(4) = 85; tie toward the smaller rate.
  CHECK(qd_allocate_relay(10, 3, 10) == 3);
  CHECK(brute_relay(10, 3, 10) == 3);

  for (std::int64_t J = 0; J <= 50; ++J)
    for (std::int64_t Qm = 0; Qm <= 50; Qm += 3)
      for (std::int64_t best : {0, 1, 4, 9})
        CHECK(qd_allocate_relay(J, Qm, best) == brute_relay(J, Qm, best));
}

TEST_CASE("scaling queues, V, and the instance scales decisions linearly") {
  // On tie-free instances, multiplying K, Q, J, V, the format table, and the
  // action caps by an integer factor multiplies each subproblem objective by
  // its square and the chosen action by the factor itself.
  SplitMix64 rng(7);
  int checked = 0;
  while (checked < 200) {
    std::int64_t K = rng.next() % 40, Q = rng.next() % 40;
    std::int64_t smax = 1 + rng.next() % 12;
    std::int64_t diff = K - Q;
    bool tie = diff > 0 && diff < 2 * smax && (diff & 1);
    if (tie) continue;  // odd gaps split evenly between the two candidates
    std::int64_t base = qd_route_uplink(K, Q, smax);
    for (std::int64_t lambda : {2, 3}) {
      CHECK(qd_route_uplink(lambda * K, lambda * Q, lambda * smax) ==
            lambda * base);
    }
    ++checked;
  }

  for (std::int64_t K : {0, 3, 40, 111, 600}) {
    for (std::int64_t lambda : {2, 5}) {
      std::vector<FormatOption> scaled;
      for (const auto& f : kFormats)
        scaled.push_back({f.reward * lambda, f.data * lambda});
      int base = qd_select_format(K, kFormats, 800.0);
      // Skip exact ties in the base problem.
      int ties = 0;
      double best = 1e300;
      for (const auto& f : kFormats) {
        double kd = static_cast<double>(K + f.data);
        double obj = kd * kd - 1600.0 * f.reward;
        if (obj < best) {
          best = obj;
          ties = 1;
        } else if (obj == best) {
          ++ties;
        }
      }
      if (ties > 1) continue;
      CHECK(qd_select_format(lambda * K, scaled, 800.0 * lambda) == base);
    }
  }
}

TEST_CASE("max-weight picks bang-bang decisions") {
  Scenario sc;
  sc.event_prob = 1.0;
  sc.V = 800.0;
  sc.horizon = 0;
  sc.seed = 3;
  for (int i = 1; i <= 2; ++i) {
    DeviceSpec dev;
    dev.id = i;
    dev.formats = kFormats;
    dev.s_q_max = 30;
    dev.s_j_max = 30;
    sc.devices.push_back(dev);
    ChannelSpec up;
    up.src = i;
    up.rates.entries = {{10, 1.0}};
    sc.channels.push_back(up);
  }
  ChannelSpec rel;
  rel.kind = ChannelSpec::Kind::Relay;
  rel.src = 1;
  rel.dst = 2;
  rel.rates.entries = {{4, 1.0}};
  sc.channels.push_back(rel);
  sc.validate();

  SlotRealization slot = sample_slot(sc, 3, 0);

  QueueVector st = QueueVector::zeros(2);
  st.K = {5, 5};
  st.Q = {5, 1};
  st.J = {5, 0};
  DecisionVector d = mw_decide(sc, st, slot, 800.0);
  CHECK(d.format[0] == 1);  // largest reward dominates at V = 800
  CHECK(d.s_q[0] == 0);     // K == Q, zero coefficient
  CHECK(d.s_j[0] == 0);
  CHECK(d.s_q[1] == 30);
  CHECK(d.s_j[1] == 30);
  CHECK(d.u[0] == 10);
  CHECK(d.u[1] == 10);
  CHECK(d.a.at(0, 1) == 4);  // J_1 = 5 > Q_2 = 1

  st.J = {0, 0};
  d = mw_decide(sc, st, slot, 800.0);
  CHECK(d.a.at(0, 1) == 0);
}

TEST_CASE("decide is a pure function of its inputs") {
  SplitMix64 rng(11);
  Scenario sc;
  sc.event_prob = 1.0;
  sc.V = 800.0;
  sc.seed = 5;
  DeviceSpec dev;
  dev.id = 1;
  dev.formats = kFormats;
  dev.s_q_max = 10;
  dev.s_j_max = 10;
  sc.devices.push_back(dev);
  ChannelSpec up;
  up.src = 1;
  up.rates.entries = {{6, 1.0}};
  sc.channels.push_back(up);
  sc.validate();

  for (int k = 0; k < 20; ++k) {
    QueueVector st = QueueVector::zeros(1);
    st.K[0] = rng.next() % 50;
    st.Q[0] = rng.next() % 50;
    st.J[0] = rng.next() % 50;
    SlotRealization slot = sample_slot(sc, rng.next(), 0);
    for (PolicyKind kind : {PolicyKind::Quadratic, PolicyKind::MaxWeight})
      CHECK(decide(kind, sc, st, slot, 800.0) ==
            decide(kind, sc, st, slot, 800.0));
  }
}

TEST_CASE("all-zero state with no event yields the zero decision") {
  Scenario sc;
  sc.event_prob = 0.0;
  sc.V = 800.0;
  sc.seed = 9;
  for (int i = 1; i <= 2; ++i) {
    DeviceSpec dev;
    dev.id = i;
    dev.formats = kFormats;
    dev.s_q_max = 30;
    dev.s_j_max = 30;
    sc.devices.push_back(dev);
    ChannelSpec up;
    up.src = i;
    up.rates.entries = {{10, 1.0}};
    sc.channels.push_back(up);
  }
  sc.validate();

  SlotRealization slot = sample_slot(sc, 9, 0);
  QueueVector st = QueueVector::zeros(2);
  for (PolicyKind kind : {PolicyKind::Quadratic, PolicyKind::MaxWeight})
    CHECK(decide(kind, sc, st, slot, 800.0) == DecisionVector::zeros(2));
}
