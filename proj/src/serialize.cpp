#include "stieltjes/serialize.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <string>
#include <vector>

namespace stieltjes {

namespace {

using nlohmann::json;

std::string idx(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + "." + key + ": missing");
  return *it;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

double number_field(const json& j, const char* key, const std::string& path) {
  return number_at(require(j, key, path), path + "." + key);
}

const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array");
  return j;
}

std::array<double, 2> pair_at(const json& j, const std::string& path) {
  array_at(j, path);
  if (j.size() != 2) throw ParseError(path + ": expected two numbers");
  return {number_at(j[0], idx(path, 0)), number_at(j[1], idx(path, 1))};
}

}  // namespace

json to_json(const MonotoneFn& fn) {
  json bps = json::array();
  for (const auto& b : fn.breakpoints()) {
    bps.push_back({{"x", b.x}, {"left", b.left}, {"value", b.value}, {"right", b.right}});
  }
  json segs = json::array();
  for (const auto& s : fn.segments()) {
    segs.push_back({{"kind", s.kind == SegmentKind::linear ? "linear" : "constant"},
                    {"slope", s.slope},
                    {"anchor", s.anchor}});
  }
  return {{"domain", {fn.domain().lo, fn.domain().hi}},
          {"breakpoints", std::move(bps)},
          {"segments", std::move(segs)}};
}

MonotoneFn monotone_from_json(const json& j) {
  auto dom = pair_at(require(j, "domain", ""), "domain");

  const json& jb = array_at(require(j, "breakpoints", ""), "breakpoints");
  std::vector<Breakpoint> bps;
  bps.reserve(jb.size());
  for (std::size_t i = 0; i < jb.size(); ++i) {
    std::string p = idx("breakpoints", i);
    bps.push_back({number_field(jb[i], "x", p), number_field(jb[i], "left", p),
                   number_field(jb[i], "value", p), number_field(jb[i], "right", p)});
  }

  const json& js = array_at(require(j, "segments", ""), "segments");
  std::vector<Segment> segs;
  segs.reserve(js.size());
  for (std::size_t i = 0; i < js.size(); ++i) {
    std::string p = idx("segments", i);
    const json& kind = require(js[i], "kind", p);
    if (!kind.is_string()) throw ParseError(p + ".kind: expected \"linear\" or \"constant\"");
    auto ks = kind.get<std::string>();
    SegmentKind k;
    if (ks == "linear") {
      k = SegmentKind::linear;
    } else if (ks == "constant") {
      k = SegmentKind::constant;
    } else {
      throw ParseError(p + ".kind: expected \"linear\" or \"constant\", got \"" + ks + "\"");
    }
    // The anchor is redundant with the left knot's right limit; accept it
    // for round-trips but let the constructor check consistency.
    double slope = number_field(js[i], "slope", p);
    double anchor = js[i].contains("anchor") ? number_field(js[i], "anchor", p)
                    : i < bps.size()         ? bps[i].right
                                             : 0.0;
    segs.push_back({k, slope, anchor});
  }

  return MonotoneFn({dom[0], dom[1]}, std::move(bps), std::move(segs));
}

json to_json(const PiecewiseFn& fn) {
  json pieces = json::array();
  const auto& bnds = fn.boundaries();
  for (std::size_t i = 0; i < fn.pieces().size(); ++i) {
    const auto& c = fn.pieces()[i];
    pieces.push_back({{"interval", {bnds[i], bnds[i + 1]}},
                      {"coeffs", {c[0], c[1], c[2], c[3]}}});
  }
  json pv = json::array();
  for (std::size_t i = 0; i < bnds.size(); ++i) {
    pv.push_back({{"x", bnds[i]}, {"value", fn.point_values()[i]}});
  }
  return {{"pieces", std::move(pieces)}, {"point_values", std::move(pv)}};
}

PiecewiseFn piecewise_from_json(const json& j) {
  const json& jp = array_at(require(j, "pieces", ""), "pieces");
  if (jp.empty()) throw ParseError("pieces: must not be empty");

  std::vector<double> bnds;
  std::vector<std::array<double, 4>> pieces;
  for (std::size_t i = 0; i < jp.size(); ++i) {
    std::string p = idx("pieces", i);
    auto iv = pair_at(require(jp[i], "interval", p), p + ".interval");
    if (bnds.empty()) {
      bnds.push_back(iv[0]);
    } else if (iv[0] != bnds.back()) {
      throw ParseError(p + ".interval: does not continue the previous piece");
    }
    bnds.push_back(iv[1]);

    const json& jc = array_at(require(jp[i], "coeffs", p), p + ".coeffs");
    if (jc.empty() || jc.size() > 4)
      throw ParseError(p + ".coeffs: expected one to four numbers");
    std::array<double, 4> c{};
    for (std::size_t k = 0; k < jc.size(); ++k)
      c[k] = number_at(jc[k], idx(p + ".coeffs", k));
    pieces.push_back(c);
  }

  // Stored boundary values default to the covering piece's polynomial, so a
  // hand-written continuous integrand can omit them.  Coefficients are in the
  // piece-local coordinate u = x - interval_left.
  std::vector<double> pv(bnds.size());
  for (std::size_t i = 0; i < bnds.size(); ++i) {
    std::size_t pi = i < pieces.size() ? i : pieces.size() - 1;
    const auto& c = pieces[pi];
    double u = bnds[i] - bnds[pi];
    pv[i] = ((c[3] * u + c[2]) * u + c[1]) * u + c[0];
  }
  if (j.contains("point_values")) {
    const json& jv = array_at(j.at("point_values"), "point_values");
    for (std::size_t i = 0; i < jv.size(); ++i) {
      std::string p = idx("point_values", i);
      double x = number_field(jv[i], "x", p);
      double v = number_field(jv[i], "value", p);
      auto it = std::find(bnds.begin(), bnds.end(), x);
      if (it == bnds.end())
        throw ParseError(p + ".x: no piece boundary at this position");
      pv[static_cast<std::size_t>(it - bnds.begin())] = v;
    }
  }

  return PiecewiseFn(std::move(bnds), std::move(pieces), std::move(pv));
}

json to_json(const LSMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) {
    atoms.push_back({{"location", a.location}, {"mass", a.mass}});
  }
  return {{"domain", {mu.domain().lo, mu.domain().hi}},
          {"atoms", std::move(atoms)},
          {"density", {{"cuts", mu.density_cuts()}, {"values", mu.density()}}},
          {"total_mass", mu.total_mass()}};
}

json to_json(const FlatLevels& flats) {
  json levels = json::array();
  for (const auto& lev : flats.levels) {
    levels.push_back({{"y", lev.y}, {"x_left", lev.x_left}, {"x_right", lev.x_right}});
  }
  return {{"levels", std::move(levels)}};
}

json to_json(const JumpSplit& split) {
  json entries = json::array();
  for (const auto& e : split.entries) {
    entries.push_back(
        {{"y", e.y}, {"delta_minus", e.delta_minus}, {"delta_plus", e.delta_plus}});
  }
  return {{"entries", std::move(entries)}, {"total", split.total()}};
}

json to_json(const Decomposition& dec) {
  return {{"n1", to_json(dec.n1)}, {"n2", to_json(dec.n2)}, {"n3", to_json(dec.n3)}};
}

json to_json(const VerificationReport& report) {
  json terms = json::array();
  for (const auto& t : report.rhs_terms) {
    terms.push_back({{"name", t.name}, {"value", t.value}});
  }
  json out{{"tag", report.tag},       {"lhs", report.lhs},
           {"rhs_terms", std::move(terms)}, {"rhs_total", report.rhs_total},
           {"residual", report.residual},   {"tolerance", report.tolerance},
           {"pass", report.pass}};
  if (report.forced) out["forced"] = true;
  if (!report.witnesses.empty()) {
    json ws = json::array();
    for (const auto& w : report.witnesses) {
      ws.push_back({{"x", w.x},
                    {"pushforward", w.pushforward},
                    {"composed", w.composed},
                    {"gap", w.gap}});
    }
    out["witnesses"] = std::move(ws);
  }
  return out;
}

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace

MonotoneFn load_monotone(const std::string& path) {
  return monotone_from_json(parse_file(path));
}

PiecewiseFn load_piecewise(const std::string& path) {
  return piecewise_from_json(parse_file(path));
}

}  // namespace stieltjes
