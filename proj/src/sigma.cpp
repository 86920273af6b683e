#include "tbl/sigma.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "tbl/errors.hpp"

namespace tbl {

namespace {

std::string trim_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

SigmaProfile SigmaProfile::indicator() {
  SigmaProfile s;
  s.kind_ = Kind::indicator;
  s.id_ = "indicator";
  return s;
}

SigmaProfile SigmaProfile::fermi(double u) {
  if (!(u >= 0.0 && u < 1.0)) throw config_error("fermi profile needs u in [0,1)");
  SigmaProfile s;
  s.kind_ = Kind::fermi;
  s.u_ = u;
  s.id_ = "fermi:" + trim_num(u);
  return s;
}

SigmaProfile SigmaProfile::table(std::map<std::int64_t, double> values_by_twice,
                                 LeftTail left, double ratio) {
  SigmaProfile s;
  s.kind_ = Kind::table;
  for (const auto& [twice, v] : values_by_twice) {
    if ((twice & 1) == 0) throw config_error("table profile: key " + std::to_string(twice) + "/2 not on Z'");
    if (!(v >= 0.0 && v <= 1.0)) throw config_error("table profile: value outside [0,1]");
  }
  if (left == LeftTail::geometric && !(ratio > 0.0 && ratio < 1.0))
    throw config_error("table profile: geometric left tail needs ratio in (0,1)");
  s.values_ = std::move(values_by_twice);
  s.left_ = left;
  s.ratio_ = ratio;
  std::ostringstream os;
  os << "table:" << s.values_.size() << ":" << (left == LeftTail::zero ? "z" : "g");
  std::size_t h = 1469598103934665603ull;
  for (const auto& [k, v] : s.values_) {
    h = (h ^ std::hash<std::int64_t>{}(k)) * 1099511628211ull;
    h = (h ^ std::hash<double>{}(v)) * 1099511628211ull;
  }
  os << ":" << std::hex << (h & 0xffffffffu);
  s.id_ = os.str();
  return s;
}

double SigmaProfile::operator()(HalfInt l) const {
  switch (kind_) {
    case Kind::indicator:
      return l.twice() > 0 ? 1.0 : 0.0;
    case Kind::fermi: {
      if (u_ == 0.0) return l.twice() > 0 ? 1.0 : 0.0;
      // 1/(1+u^l); evaluate through exp(l log u) on the small side for accuracy
      const double e = l.value() * std::log(u_);
      if (e <= 0.0) return 1.0 / (1.0 + std::exp(e));
      const double w = std::exp(-e);
      return w / (1.0 + w);
    }
    case Kind::table: {
      auto it = values_.find(l.twice());
      if (it != values_.end()) return it->second;
      if (values_.empty()) return 0.0;
      if (l.twice() > values_.rbegin()->first) return 0.0;
      if (l.twice() < values_.begin()->first) {
        if (left_ == LeftTail::zero) return 0.0;
        const auto& [k0, v0] = *values_.begin();
        const double steps = static_cast<double>(k0 - l.twice()) / 2.0;
        return v0 * std::pow(ratio_, steps);
      }
      return 0.0;  // interior gaps read as empty sites
    }
  }
  return 0.0;
}

double SigmaProfile::tail_sum_bound(double T) const {
  // bound for sum over l <= -T; positive part of the range (l in (0,-T]) adds
  // at most one unit per site since sigma <= 1
  const double pos_count = (T < 0.0) ? std::floor(-T + 0.5) : 0.0;
  switch (kind_) {
    case Kind::indicator:
      return pos_count;
    case Kind::fermi: {
      if (u_ == 0.0) return pos_count;
      // sigma(l) <= u^{-l} for l < 0; geometric sum from the first half-integer
      // at or below min(-T, -1/2)
      double t0 = std::max(T, 0.5);
      const double first = std::ceil(t0 - 0.5) + 0.5;  // smallest half-integer >= t0
      return pos_count + std::pow(u_, first) / (1.0 - u_);
    }
    case Kind::table: {
      double s = pos_count;
      for (const auto& [twice, v] : values_) {
        if (0.5 * static_cast<double>(twice) <= -T && twice > 0) continue;  // already counted
        if (0.5 * static_cast<double>(twice) <= -T && twice < 0) s += v;
      }
      if (left_ == LeftTail::geometric && !values_.empty()) {
        const auto& [k0, v0] = *values_.begin();
        const double lo = 0.5 * static_cast<double>(k0);
        double start_steps = 1.0;
        if (-T < lo) start_steps = std::ceil(lo - (-T));
        s += v0 * std::pow(ratio_, start_steps) / (1.0 - ratio_);
      }
      return s;
    }
  }
  return 0.0;
}

double SigmaProfile::tail_cut(double eps, double cap) const {
  double T = 0.5;
  while (tail_sum_bound(T) > eps) {
    T += 1.0;
    if (T > cap)
      throw resource_limit_error("sigma tail certificate cannot reach " + std::to_string(eps) +
                                 " within the window cap");
  }
  return T;
}

bool SigmaProfile::is_zero() const {
  switch (kind_) {
    case Kind::indicator:
      return false;
    case Kind::fermi:
      return false;  // fermi is positive everywhere for u in [0,1)
    case Kind::table:
      for (const auto& [k, v] : values_)
        if (v != 0.0) return false;
      return true;
  }
  return false;
}

std::string SigmaProfile::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::indicator:
      j["kind"] = "indicator";
      break;
    case Kind::fermi:
      j["kind"] = "fermi";
      j["u"] = u_;
      break;
    case Kind::table: {
      j["kind"] = "table";
      nlohmann::json vals = nlohmann::json::object();
      for (const auto& [k, v] : values_) vals[std::to_string(k) + "/2"] = v;
      j["values"] = vals;
      if (left_ == LeftTail::zero)
        j["left_tail"] = {{"type", "zero"}};
      else
        j["left_tail"] = {{"type", "geometric"}, {"ratio", ratio_}};
      break;
    }
  }
  return j.dump();
}

SigmaProfile SigmaProfile::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("sigma profile: bad JSON: ") + e.what());
  }
  const std::string kind = j.value("kind", "");
  if (kind == "indicator") return indicator();
  if (kind == "fermi") {
    if (!j.contains("u")) throw config_error("fermi profile: missing \"u\"");
    return fermi(j["u"].get<double>());
  }
  if (kind == "table") {
    std::map<std::int64_t, double> vals;
    if (j.contains("values"))
      for (auto it = j["values"].begin(); it != j["values"].end(); ++it)
        vals[HalfInt::parse(it.key()).twice()] = it.value().get<double>();
    LeftTail lt = LeftTail::zero;
    double ratio = 0.0;
    if (j.contains("left_tail")) {
      const std::string t = j["left_tail"].value("type", "zero");
      if (t == "geometric") {
        lt = LeftTail::geometric;
        ratio = j["left_tail"].value("ratio", 0.0);
      } else if (t != "zero") {
        throw config_error("table profile: left_tail type must be \"zero\" or \"geometric\"");
      }
    }
    return table(std::move(vals), lt, ratio);
  }
  throw config_error("sigma profile: unknown kind \"" + kind + "\"");
}

}  // namespace tbl
