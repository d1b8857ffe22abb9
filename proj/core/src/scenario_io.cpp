#include "qoinet/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace qoinet {

namespace {

struct Token {
  std::string text;
  int line = 0;
};

class Cursor {
 public:
  Cursor(std::istream& in, std::string name) : name_(std::move(name)) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens_.push_back({tok, line_no});
    }
  }

  bool done() const { return pos_ >= tokens_.size(); }

  const Token& peek() const {
    if (done()) fail_at(last_line(), "unexpected end of file");
    return tokens_[pos_];
  }

  Token next(const char* what) {
    if (done())
      fail_at(last_line(), std::string("unexpected end of file, expected ") + what);
    return tokens_[pos_++];
  }

  void expect(const char* literal) {
    Token t = next(literal);
    if (t.text != literal)
      fail_at(t.line, std::string("expected '") + literal + "', got '" + t.text + "'");
  }

  double num(const char* what) {
    Token t = next(what);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t.text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.text.size())
      fail_at(t.line, std::string("expected ") + what + ", got '" + t.text + "'");
    return v;
  }

  std::int64_t integer(const char* what) {
    Token t = next(what);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(t.text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.text.size())
      fail_at(t.line, std::string("expected ") + what + ", got '" + t.text + "'");
    return v;
  }

  std::uint64_t uinteger(const char* what) {
    Token t = next(what);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(t.text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.text.size() || t.text[0] == '-')
      fail_at(t.line, std::string("expected ") + what + ", got '" + t.text + "'");
    return v;
  }

  [[noreturn]] void fail_at(int line, const std::string& msg) const {
    throw ConfigError(name_ + ":" + std::to_string(line) + ": " + msg);
  }

  int last_line() const { return tokens_.empty() ? 0 : tokens_.back().line; }

 private:
  std::string name_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

DeviceSpec parse_device(Cursor& cur) {
  DeviceSpec dev;
  dev.id = static_cast<int>(cur.integer("a device id"));
  cur.expect("{");
  bool have_sq = false, have_sj = false;
  for (;;) {
    Token t = cur.next("a device key or '}'");
    if (t.text == "}") break;
    if (t.text == "observe_prob") {
      dev.observe_prob = cur.num("a probability");
    } else if (t.text == "s_q_max") {
      dev.s_q_max = cur.integer("an integer");
      have_sq = true;
    } else if (t.text == "s_j_max") {
      dev.s_j_max = cur.integer("an integer");
      have_sj = true;
    } else if (t.text == "format") {
      FormatOption f;
      f.data = cur.integer("a data amount");
      f.reward = cur.num("a reward");
      dev.formats.push_back(f);
    } else {
      cur.fail_at(t.line, "unknown device key '" + t.text + "'");
    }
  }
  if (!have_sq)
    throw ConfigError("device " + std::to_string(dev.id) + ": missing s_q_max");
  if (!have_sj)
    throw ConfigError("device " + std::to_string(dev.id) + ": missing s_j_max");
  return dev;
}

ChannelSpec parse_channel(Cursor& cur) {
  ChannelSpec ch;
  Token kind = cur.next("'uplink' or 'relay'");
  if (kind.text == "uplink") {
    ch.kind = ChannelSpec::Kind::Uplink;
    ch.src = static_cast<int>(cur.integer("a device id"));
  } else if (kind.text == "relay") {
    ch.kind = ChannelSpec::Kind::Relay;
    ch.src = static_cast<int>(cur.integer("a source device id"));
    ch.dst = static_cast<int>(cur.integer("a destination device id"));
  } else {
    cur.fail_at(kind.line, "expected 'uplink' or 'relay', got '" + kind.text + "'");
  }
  cur.expect("{");
  for (;;) {
    Token t = cur.next("'rate' or '}'");
    if (t.text == "}") break;
    if (t.text != "rate") cur.fail_at(t.line, "expected 'rate', got '" + t.text + "'");
    RateDistribution::Entry e;
    e.best_rate = cur.integer("a rate");
    e.probability = cur.num("a probability");
    ch.rates.entries.push_back(e);
  }
  return ch;
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& name) {
  Cursor cur(in, name);
  Scenario sc;
  bool have_event = false, have_v = false, have_horizon = false, have_seed = false;

  while (!cur.done()) {
    Token t = cur.next("a key");
    if (t.text == "event_prob") {
      sc.event_prob = cur.num("a probability");
      have_event = true;
    } else if (t.text == "V") {
      sc.V = cur.num("a number");
      have_v = true;
    } else if (t.text == "horizon") {
      sc.horizon = cur.integer("a slot count");
      have_horizon = true;
    } else if (t.text == "seed") {
      sc.seed = cur.uinteger("a seed");
      have_seed = true;
    } else if (t.text == "device") {
      sc.devices.push_back(parse_device(cur));
    } else if (t.text == "channel") {
      sc.channels.push_back(parse_channel(cur));
    } else {
      cur.fail_at(t.line, "unknown key '" + t.text + "'");
    }
  }

  for (const char* missing :
       {have_event ? nullptr : "event_prob", have_v ? nullptr : "V",
        have_horizon ? nullptr : "horizon", have_seed ? nullptr : "seed"}) {
    if (missing)
      throw ConfigError(name + ": missing required key '" + missing + "'");
  }

  std::sort(sc.devices.begin(), sc.devices.end(),
            [](const DeviceSpec& a, const DeviceSpec& b) { return a.id < b.id; });
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  return parse_scenario(in, path);
}

Scenario parse_scenario_text(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  return parse_scenario(in, name);
}

const char* two_device_scenario_text() {
  return R"(event_prob 0.3
V 800
horizon 1000000
seed 20240601

device 1 {
  observe_prob 1.0
  s_q_max 30
  s_j_max 30
  format 0 0
  format 100 20
  format 50 15
  format 10 10
}

device 2 {
  observe_prob 1.0
  s_q_max 30
  s_j_max 30
  format 0 0
  format 100 20
  format 50 15
  format 10 10
}

channel uplink 1 {
  rate 4 0.2
  rate 8 0.4
  rate 10 0.4
}

channel uplink 2 {
  rate 2 0.3
  rate 4 0.4
  rate 6 0.3
}

channel relay 1 2 {
  rate 2 0.5
  rate 4 0.5
}

channel relay 2 1 {
  rate 2 0.5
  rate 4 0.5
}
)";
}

}  // namespace qoinet
