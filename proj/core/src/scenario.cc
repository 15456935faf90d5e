// Copyright 2026 The rxmarket Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "rxmarket/scenario.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

namespace rxmarket {

using nlohmann::json;

ScenarioError::ScenarioError(std::string origin, std::vector<Diagnostic> diagnostics)
    : Error(diagnostics.empty() ? "invalid-scenario" : diagnostics.front().code,
            Format(origin, diagnostics)),
      origin_(std::move(origin)),
      diagnostics_(std::move(diagnostics)) {}

std::string ScenarioError::Format(const std::string& origin, const std::vector<Diagnostic>& d) {
  std::string out;
  for (const Diagnostic& x : d) {
    if (!out.empty()) out += "\n";
    out += origin + ":" + std::to_string(x.line) + ": " + x.code + ": " + x.message;
  }
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// Line map: JSON pointer -> line of the value, recorded during a SAX pass.

struct ReadPosition {
  const char* current = nullptr;
};

// Input iterator that publishes how far the parser has read.
class TrackingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  TrackingIterator(const char* p, ReadPosition* pos) : p_(p), pos_(pos) {}
  reference operator*() const { return *p_; }
  TrackingIterator& operator++() {
    ++p_;
    if (pos_) pos_->current = p_;
    return *this;
  }
  TrackingIterator operator++(int) {
    TrackingIterator old = *this;
    ++*this;
    return old;
  }
  friend bool operator==(const TrackingIterator& a, const TrackingIterator& b) {
    return a.p_ == b.p_;
  }
  friend bool operator!=(const TrackingIterator& a, const TrackingIterator& b) {
    return a.p_ != b.p_;
  }

 private:
  const char* p_;
  ReadPosition* pos_;
};

std::string EscapePointerToken(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

class LineMap {
 public:
  explicit LineMap(std::string_view text) : text_(text) {
    newlines_before_.assign(text.size() + 1, 0);
    for (std::size_t i = 0; i < text.size(); ++i) {
      newlines_before_[i + 1] = newlines_before_[i] + (text[i] == '\n' ? 1 : 0);
    }
  }

  // Line of the last non-space character before byte `offset`.
  std::size_t LineBefore(std::size_t offset) const {
    offset = std::min(offset, text_.size());
    std::size_t p = offset;
    while (p > 0 && std::isspace(static_cast<unsigned char>(text_[p - 1]))) --p;
    if (p > 0) --p;
    return newlines_before_[p] + 1;
  }
  std::size_t LineAt(std::size_t offset) const {
    return newlines_before_[std::min(offset, text_.size())] + 1;
  }

  void Record(const std::string& pointer, std::size_t line) { lines_.emplace(pointer, line); }

  std::size_t Find(std::string pointer) const {
    while (true) {
      auto it = lines_.find(pointer);
      if (it != lines_.end()) return it->second;
      if (pointer.empty()) return 0;
      pointer.erase(pointer.rfind('/'));
    }
  }

 private:
  std::string_view text_;
  std::vector<std::size_t> newlines_before_;
  std::map<std::string, std::size_t> lines_;
};

class LineRecorder {
 public:
  LineRecorder(LineMap& map, const ReadPosition& pos, const char* begin)
      : map_(map), pos_(pos), begin_(begin) {}

  bool null() { return Value(); }
  bool boolean(bool) { return Value(); }
  bool number_integer(json::number_integer_t) { return Value(); }
  bool number_unsigned(json::number_unsigned_t) { return Value(); }
  bool number_float(json::number_float_t, const json::string_t&) { return Value(); }
  bool string(json::string_t&) { return Value(); }
  bool binary(json::binary_t&) { return Value(); }
  bool start_object(std::size_t) {
    const std::string p = NextPointer();
    map_.Record(p, Line());
    stack_.push_back({false, 0, "", p});
    return true;
  }
  bool key(json::string_t& k) {
    stack_.back().key = k;
    return true;
  }
  bool end_object() {
    stack_.pop_back();
    return true;
  }
  bool start_array(std::size_t) {
    const std::string p = NextPointer();
    map_.Record(p, Line());
    stack_.push_back({true, 0, "", p});
    return true;
  }
  bool end_array() {
    stack_.pop_back();
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) {
    return false;
  }

 private:
  struct Frame {
    bool is_array;
    std::size_t index;
    std::string key;
    std::string pointer;
  };

  std::size_t Line() const {
    return map_.LineBefore(static_cast<std::size_t>(pos_.current - begin_));
  }

  std::string NextPointer() {
    if (stack_.empty()) return "";
    Frame& f = stack_.back();
    if (f.is_array) return f.pointer + "/" + std::to_string(f.index++);
    return f.pointer + "/" + EscapePointerToken(f.key);
  }

  bool Value() {
    map_.Record(NextPointer(), Line());
    return true;
  }

  LineMap& map_;
  const ReadPosition& pos_;
  const char* begin_;
  std::vector<Frame> stack_;
};

// ---------------------------------------------------------------------------
// Validation context.

class Context {
 public:
  Context(const LineMap& lines) : lines_(lines) {}

  void Add(std::string code, std::string message, const std::string& pointer) {
    diags_.push_back({std::move(code), std::move(message), lines_.Find(pointer), pointer});
  }
  bool ok() const { return diags_.empty(); }
  std::vector<Diagnostic>& diagnostics() { return diags_; }

  const json* Field(const json& obj, const std::string& pointer, const char* name,
                    bool required = true) {
    auto it = obj.find(name);
    if (it == obj.end()) {
      if (required) Add("missing-field", std::string("missing field '") + name + "'", pointer);
      return nullptr;
    }
    return &*it;
  }

  bool Expect(const json& v, json::value_t type, const std::string& pointer, const char* what) {
    bool good = v.type() == type;
    if (type == json::value_t::number_float) good = v.is_number();
    if (!good) Add("wrong-type", std::string("expected ") + what, pointer);
    return good;
  }

  std::optional<std::string> String(const json& v, const std::string& pointer) {
    if (!Expect(v, json::value_t::string, pointer, "a string")) return std::nullopt;
    return v.get<std::string>();
  }
  std::optional<double> Number(const json& v, const std::string& pointer) {
    if (!Expect(v, json::value_t::number_float, pointer, "a number")) return std::nullopt;
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      Add("non-finite", "number is not finite", pointer);
      return std::nullopt;
    }
    return x;
  }
  std::optional<std::vector<double>> Numbers(const json& v, const std::string& pointer) {
    if (!Expect(v, json::value_t::array, pointer, "an array of numbers")) return std::nullopt;
    std::vector<double> out;
    bool good = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto x = Number(v[i], pointer + "/" + std::to_string(i));
      if (x) {
        out.push_back(*x);
      } else {
        good = false;
      }
    }
    if (!good) return std::nullopt;
    return out;
  }
  std::optional<std::vector<std::string>> Strings(const json& v, const std::string& pointer) {
    if (!Expect(v, json::value_t::array, pointer, "an array of strings")) return std::nullopt;
    std::vector<std::string> out;
    bool good = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto x = String(v[i], pointer + "/" + std::to_string(i));
      if (x) {
        out.push_back(*x);
      } else {
        good = false;
      }
    }
    if (!good) return std::nullopt;
    return out;
  }

 private:
  const LineMap& lines_;
  std::vector<Diagnostic> diags_;
};

std::string QuotedName(const std::string& detail, const std::string& prefix) {
  if (detail.rfind(prefix + " '", 0) != 0) return "";
  const std::size_t start = prefix.size() + 2;
  const std::size_t end = detail.find('\'', start);
  return end == std::string::npos ? "" : detail.substr(start, end - start);
}

std::optional<NetworkGraph> ParseNetwork(const json& root, Context& ctx) {
  std::vector<AreaId> areas;
  std::vector<NetworkGraph::Link> links;
  std::vector<std::string> link_pointers;
  bool good = true;

  if (const json* v = ctx.Field(root, "", "areas")) {
    if (auto names = ctx.Strings(*v, "/areas")) {
      for (auto& n : *names) areas.push_back(AreaId{n});
    } else {
      good = false;
    }
  } else {
    good = false;
  }

  if (const json* v = ctx.Field(root, "", "links")) {
    if (ctx.Expect(*v, json::value_t::array, "/links", "an array of links")) {
      for (std::size_t k = 0; k < v->size(); ++k) {
        const std::string p = "/links/" + std::to_string(k);
        const json& item = (*v)[k];
        if (!ctx.Expect(item, json::value_t::object, p, "a link object")) {
          good = false;
          continue;
        }
        const json* id = ctx.Field(item, p, "id");
        const json* ends = ctx.Field(item, p, "ends");
        auto name = id ? ctx.String(*id, p + "/id") : std::nullopt;
        auto pair = ends ? ctx.Strings(*ends, p + "/ends") : std::nullopt;
        if (pair && pair->size() != 2) {
          ctx.Add("wrong-type", "a link has exactly two ends", p + "/ends");
          pair.reset();
        }
        if (!name || !pair) {
          good = false;
          continue;
        }
        links.push_back({LinkId{*name}, AreaId{(*pair)[0]}, AreaId{(*pair)[1]}});
        link_pointers.push_back(p);
      }
    } else {
      good = false;
    }
  } else {
    good = false;
  }
  if (!good) return std::nullopt;

  NetworkGraph network(areas, links);
  for (const NetworkViolation& v : network.Validate()) {
    std::string pointer = "/links";
    if (auto name = QuotedName(v.detail, "link"); !name.empty()) {
      for (std::size_t k = links.size(); k-- > 0;) {
        if (links[k].id.name == name) {
          pointer = link_pointers[k];
          break;
        }
      }
    } else if (auto area = QuotedName(v.detail, "area"); !area.empty()) {
      pointer = "/areas";
      for (std::size_t i = areas.size(); i-- > 0;) {
        if (areas[i].name == area) {
          pointer = "/areas/" + std::to_string(i);
          break;
        }
      }
    } else if (v.code == "no-areas" || v.code == "too-many-areas") {
      pointer = "/areas";
    }
    ctx.Add(v.code, v.detail, pointer);
  }
  if (!ctx.ok()) return std::nullopt;
  return network;
}

std::optional<AllocationGrid::Axis> ParseAxis(const json& v, const std::string& pointer,
                                              Context& ctx) {
  if (!ctx.Expect(v, json::value_t::object, pointer, "a {values, default} object")) {
    return std::nullopt;
  }
  const json* values = ctx.Field(v, pointer, "values");
  const json* def = ctx.Field(v, pointer, "default");
  auto list = values ? ctx.Numbers(*values, pointer + "/values") : std::nullopt;
  auto d = def ? ctx.Number(*def, pointer + "/default") : std::nullopt;
  if (!list || !d) return std::nullopt;
  return AllocationGrid::Axis{*list, *d};
}

std::optional<AllocationGrid> ParseGrid(const json& root, const NetworkGraph& network,
                                        bool& uniform, Context& ctx) {
  const json* g = ctx.Field(root, "", "grid");
  if (!g) return std::nullopt;
  if (!ctx.Expect(*g, json::value_t::object, "/grid", "a grid object")) return std::nullopt;

  std::vector<AllocationGrid::Axis> axes;
  std::vector<std::string> pointers;
  uniform = g->contains("values");
  if (uniform) {
    auto axis = ParseAxis(*g, "/grid", ctx);
    if (!axis) return std::nullopt;
    axes.assign(network.num_links(), *axis);
    pointers.assign(network.num_links(), "/grid");
  } else {
    for (auto it = g->begin(); it != g->end(); ++it) {
      if (!network.FindLink(LinkId{it.key()})) {
        ctx.Add("unknown-link", "grid names undeclared link '" + it.key() + "'",
                "/grid/" + EscapePointerToken(it.key()));
      }
    }
    bool good = true;
    for (std::size_t k = 0; k < network.num_links(); ++k) {
      const std::string& name = network.link(k).name;
      const std::string p = "/grid/" + EscapePointerToken(name);
      auto it = g->find(name);
      if (it == g->end()) {
        ctx.Add("missing-field", "grid has no entry for link '" + name + "'", "/grid");
        good = false;
        continue;
      }
      auto axis = ParseAxis(*it, p, ctx);
      if (!axis) {
        good = false;
        continue;
      }
      axes.push_back(*axis);
      pointers.push_back(p);
    }
    if (!good || !ctx.ok()) return std::nullopt;
  }

  AllocationGrid grid(axes);
  const auto violations = grid.Validate();
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const GridViolation& v = violations[i];
    // Violations read "link #k ..."; point at that link's block.
    std::size_t k = 0;
    if (std::sscanf(v.detail.c_str(), "link #%zu", &k) != 1 || k >= pointers.size()) k = 0;
    std::string pointer = pointers.empty() ? "/grid" : pointers[k];
    if (v.code == "default-off-grid") pointer += "/default";
    if (v.code == "grid-out-of-range" || v.code == "grid-not-ascending") pointer += "/values";
    std::string detail = v.detail;
    if (k < network.num_links() && detail.rfind("link #", 0) == 0) {
      detail = "link '" + network.link(k).name + "'" + detail.substr(detail.find(' '));
    }
    ctx.Add(v.code, detail, pointer);
    if (uniform) break;  // identical for every link
  }
  if (!ctx.ok()) return std::nullopt;
  return grid;
}

std::optional<std::pair<BidTable, BidSource>> ParseBid(const json& item,
                                                       const std::string& p,
                                                       std::size_t area,
                                                       const NetworkGraph& network,
                                                       const AllocationGrid& grid,
                                                       Context& ctx) {
  const json* kind_v = ctx.Field(item, p, "kind");
  auto kind = kind_v ? ctx.String(*kind_v, p + "/kind") : std::nullopt;
  if (!kind) return std::nullopt;
  const auto incident = network.IncidentLinks(area);
  const std::size_t before = ctx.diagnostics().size();

  if (*kind == "quadratic") {
    const json* c = ctx.Field(item, p, "coeffs");
    auto flat = c ? ctx.Numbers(*c, p + "/coeffs") : std::nullopt;
    if (!flat) return std::nullopt;
    if (flat->size() != QuadraticCoefficients::FlatSize(incident.size())) {
      ctx.Add("dimension-mismatch",
              "area '" + network.area(area).name + "' has " + std::to_string(incident.size()) +
                  " incident links and needs " +
                  std::to_string(QuadraticCoefficients::FlatSize(incident.size())) +
                  " coefficients, got " + std::to_string(flat->size()),
              p + "/coeffs");
      return std::nullopt;
    }
    BidSource src{BidSource::Kind::kQuadratic,
                  QuadraticCoefficients::FromFlat(*flat, incident.size())};
    return std::make_pair(QuadraticValuation(network, area, grid, src.coefficients), src);
  }
  if (*kind != "table") {
    ctx.Add("unknown-kind", "bid kind must be \"quadratic\" or \"table\", got \"" + *kind + "\"",
            p + "/kind");
    return std::nullopt;
  }

  // Column order as written, mapped onto canonical incident order.
  std::vector<std::size_t> written = incident;
  if (const json* l = ctx.Field(item, p, "links", false)) {
    auto names = ctx.Strings(*l, p + "/links");
    if (!names) return std::nullopt;
    written.clear();
    for (std::size_t i = 0; i < names->size(); ++i) {
      const std::string lp = p + "/links/" + std::to_string(i);
      auto k = network.FindLink(LinkId{(*names)[i]});
      if (!k) {
        ctx.Add("unknown-link", "undeclared link '" + (*names)[i] + "'", lp);
        continue;
      }
      if (std::find(incident.begin(), incident.end(), *k) == incident.end()) {
        ctx.Add("non-incident-link",
                "bid of '" + network.area(area).name + "' covers link '" + (*names)[i] +
                    "', which is not incident to it",
                lp);
        continue;
      }
      if (std::find(written.begin(), written.end(), *k) != written.end()) {
        ctx.Add("duplicate-link", "link '" + (*names)[i] + "' listed twice", lp);
        continue;
      }
      written.push_back(*k);
    }
    if (ctx.diagnostics().size() != before) return std::nullopt;
    if (written.size() != incident.size()) {
      ctx.Add("domain-mismatch",
              "bid of '" + network.area(area).name + "' must cover all of its incident links",
              p + "/links");
      return std::nullopt;
    }
  }
  std::vector<std::size_t> column(incident.size());
  for (std::size_t c = 0; c < incident.size(); ++c) {
    column[c] = static_cast<std::size_t>(
        std::find(written.begin(), written.end(), incident[c]) - written.begin());
  }

  const json* e = ctx.Field(item, p, "entries");
  if (!e || !ctx.Expect(*e, json::value_t::array, p + "/entries", "an array of entries")) {
    return std::nullopt;
  }
  std::vector<std::pair<BidTable::Tuple, Money>> entries;
  for (std::size_t j = 0; j < e->size(); ++j) {
    const std::string ep = p + "/entries/" + std::to_string(j);
    const json& entry = (*e)[j];
    if (!ctx.Expect(entry, json::value_t::object, ep, "a {chi, value} object")) continue;
    const json* chi = ctx.Field(entry, ep, "chi");
    const json* value = ctx.Field(entry, ep, "value");
    auto x = chi ? ctx.Numbers(*chi, ep + "/chi") : std::nullopt;
    auto v = value ? ctx.Number(*value, ep + "/value") : std::nullopt;
    if (!x || !v) continue;
    if (x->size() != incident.size()) {
      ctx.Add("dimension-mismatch",
              "tuple has " + std::to_string(x->size()) + " entries, expected " +
                  std::to_string(incident.size()),
              ep + "/chi");
      continue;
    }
    BidTable::Tuple canonical(incident.size());
    bool on_grid = true;
    bool is_default = true;
    for (std::size_t c = 0; c < incident.size(); ++c) {
      canonical[c] = (*x)[column[c]];
      if (!grid.IndexOf(incident[c], canonical[c])) on_grid = false;
      if (std::abs(canonical[c] - grid.default_value(incident[c])) > kTolerance) {
        is_default = false;
      }
    }
    if (!on_grid) {
      ctx.Add("off-grid", "tuple is not on the permitted grid", ep + "/chi");
      continue;
    }
    if (is_default && std::abs(*v) > kTolerance) {
      ctx.Add("default-not-zero",
              "bid of '" + network.area(area).name + "' is " + std::to_string(*v) +
                  " at the default tuple; it must be 0",
              ep + "/value");
      continue;
    }
    entries.emplace_back(std::move(canonical), *v);
  }
  if (ctx.diagnostics().size() != before) return std::nullopt;
  try {
    BidTable table = BidTable::FromEntries(network.area(area), incident, grid, entries);
    return std::make_pair(std::move(table), BidSource{BidSource::Kind::kTable, {}});
  } catch (const Error& err) {
    ctx.Add(err.code(), err.what(), p + "/entries");
    return std::nullopt;
  }
}

std::optional<std::pair<BidProfile, std::vector<BidSource>>> ParseProfile(
    const json& v, const std::string& pointer, const NetworkGraph& network,
    const AllocationGrid& grid, Context& ctx) {
  if (!ctx.Expect(v, json::value_t::array, pointer, "an array of bids")) return std::nullopt;
  std::vector<std::optional<BidTable>> tables(network.num_areas());
  std::vector<BidSource> sources(network.num_areas());
  const std::size_t before = ctx.diagnostics().size();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = pointer + "/" + std::to_string(i);
    const json& item = v[i];
    if (!ctx.Expect(item, json::value_t::object, p, "a bid object")) continue;
    const json* area_v = ctx.Field(item, p, "area");
    auto name = area_v ? ctx.String(*area_v, p + "/area") : std::nullopt;
    if (!name) continue;
    auto area = network.FindArea(AreaId{*name});
    if (!area) {
      ctx.Add("unknown-area", "bid for undeclared area '" + *name + "'", p + "/area");
      continue;
    }
    if (tables[*area]) {
      ctx.Add("duplicate-bid", "area '" + *name + "' has more than one bid", p + "/area");
      continue;
    }
    auto parsed = ParseBid(item, p, *area, network, grid, ctx);
    if (!parsed) continue;
    tables[*area] = std::move(parsed->first);
    sources[*area] = std::move(parsed->second);
  }
  for (std::size_t a = 0; a < network.num_areas(); ++a) {
    if (!tables[a] && ctx.diagnostics().size() == before) {
      ctx.Add("missing-bid", "no bid for area '" + network.area(a).name + "'", pointer);
    }
  }
  if (ctx.diagnostics().size() != before) return std::nullopt;
  std::vector<BidTable> out;
  for (auto& t : tables) out.push_back(std::move(*t));
  return std::make_pair(BidProfile(std::move(out)), std::move(sources));
}

std::optional<std::pair<double, double>> ParseRange(const json& v, const std::string& p,
                                                    Context& ctx) {
  auto r = ctx.Numbers(v, p);
  if (!r) return std::nullopt;
  if (r->size() != 2 || (*r)[0] > (*r)[1]) {
    ctx.Add("bad-range", "a range is [lo, hi] with lo <= hi", p);
    return std::nullopt;
  }
  return std::make_pair((*r)[0], (*r)[1]);
}

ExperimentConfig ParseExperiments(const json& v, const NetworkGraph& network, Context& ctx) {
  ExperimentConfig cfg;
  const std::string p = "/experiments";
  if (!ctx.Expect(v, json::value_t::object, p, "an experiments object")) return cfg;
  if (const json* s = ctx.Field(v, p, "seed", false)) {
    if (s->is_number_unsigned()) {
      cfg.seed = s->get<std::uint64_t>();
    } else {
      ctx.Add("wrong-type", "expected a nonnegative integer", p + "/seed");
    }
  }
  if (const json* s = ctx.Field(v, p, "samples", false)) {
    if (s->is_number_unsigned() && s->get<std::uint64_t>() > 0) {
      cfg.samples = s->get<std::size_t>();
    } else {
      ctx.Add("wrong-type", "expected a positive integer", p + "/samples");
    }
  }
  if (const json* r = ctx.Field(v, p, "ranges", false)) {
    if (ctx.Expect(*r, json::value_t::object, p + "/ranges", "a ranges object")) {
      CoefficientRanges ranges;
      bool good = true;
      if (const json* q = ctx.Field(*r, p + "/ranges", "quadratic", false)) {
        if (auto x = ParseRange(*q, p + "/ranges/quadratic", ctx)) {
          std::tie(ranges.quadratic_lo, ranges.quadratic_hi) = *x;
        } else {
          good = false;
        }
      }
      if (const json* c = ctx.Field(*r, p + "/ranges", "cross", false)) {
        if (auto x = ParseRange(*c, p + "/ranges/cross", ctx)) {
          std::tie(ranges.cross_lo, ranges.cross_hi) = *x;
        } else {
          good = false;
        }
      }
      if (good) cfg.ranges = ranges;
    }
  }
  if (const json* c = ctx.Field(v, p, "coalition", false)) {
    if (auto names = ctx.Strings(*c, p + "/coalition")) {
      for (std::size_t i = 0; i < names->size(); ++i) {
        if (!network.FindArea(AreaId{(*names)[i]})) {
          ctx.Add("unknown-area", "coalition names undeclared area '" + (*names)[i] + "'",
                  p + "/coalition/" + std::to_string(i));
        }
      }
      cfg.coalition = *names;
    }
  }
  if (const json* s = ctx.Field(v, p, "scale", false)) {
    if (auto x = ctx.Number(*s, p + "/scale")) {
      if (*x < 0.0) {
        ctx.Add("negative-scale", "scale factor must be nonnegative", p + "/scale");
      } else {
        cfg.scale = *x;
      }
    }
  }
  if (const json* s = ctx.Field(v, p, "epsilon_bar", false)) {
    if (auto x = ctx.Number(*s, p + "/epsilon_bar")) {
      if (*x < 0.0) {
        ctx.Add("negative-epsilon", "epsilon_bar must be nonnegative", p + "/epsilon_bar");
      } else {
        cfg.epsilon_bar = *x;
      }
    }
  }
  return cfg;
}

json SaveProfile(const BidProfile& profile, const std::vector<BidSource>& sources,
                 const NetworkGraph& network) {
  json out = json::array();
  for (std::size_t a = 0; a < profile.size(); ++a) {
    json item;
    item["area"] = network.area(a).name;
    if (sources[a].kind == BidSource::Kind::kQuadratic) {
      item["kind"] = "quadratic";
      item["coeffs"] = sources[a].coefficients.Flat();
    } else {
      item["kind"] = "table";
      json links = json::array();
      for (std::size_t k : profile[a].links()) links.push_back(network.link(k).name);
      item["links"] = links;
      json entries = json::array();
      for (const auto& [x, v] : profile[a].Entries()) {
        entries.push_back({{"chi", x}, {"value", v}});
      }
      item["entries"] = entries;
    }
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace

Scenario ParseScenario(std::string_view text, const std::string& origin) {
  LineMap lines(text);
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& err) {
    const std::size_t byte = err.byte > 0 ? err.byte - 1 : 0;
    std::string message = err.what();
    if (auto pos = message.find("parse error"); pos != std::string::npos) {
      message = message.substr(pos);
    }
    throw ScenarioError(origin, {{"parse-error", message, lines.LineAt(byte), ""}});
  }
  {
    ReadPosition pos{text.data()};
    LineRecorder recorder(lines, pos, text.data());
    json::sax_parse(TrackingIterator(text.data(), &pos),
                    TrackingIterator(text.data() + text.size(), nullptr), &recorder);
  }

  Context ctx(lines);
  auto fail = [&]() { throw ScenarioError(origin, std::move(ctx.diagnostics())); };
  if (!root.is_object()) {
    ctx.Add("wrong-type", "a scenario is a JSON object", "");
    fail();
  }
  // Unknown fields are reported even when later sections fail.
  for (auto it = root.begin(); it != root.end(); ++it) {
    static const char* const kKnown[] = {"areas", "links", "grid", "bids", "truth",
                                         "experiments"};
    if (std::find(std::begin(kKnown), std::end(kKnown), it.key()) == std::end(kKnown)) {
      ctx.Add("unknown-field", "unknown top-level field '" + it.key() + "'",
              "/" + EscapePointerToken(it.key()));
    }
  }
  auto network = ParseNetwork(root, ctx);
  if (!network) fail();
  bool uniform = true;
  auto grid = ParseGrid(root, *network, uniform, ctx);
  if (!grid) fail();

  std::optional<std::pair<BidProfile, std::vector<BidSource>>> bids;
  if (const json* b = ctx.Field(root, "", "bids")) bids = ParseProfile(*b, "/bids", *network, *grid, ctx);
  std::optional<std::pair<BidProfile, std::vector<BidSource>>> truth;
  if (const json* t = ctx.Field(root, "", "truth", false)) {
    truth = ParseProfile(*t, "/truth", *network, *grid, ctx);
  }
  ExperimentConfig experiments;
  if (const json* x = ctx.Field(root, "", "experiments", false)) {
    experiments = ParseExperiments(*x, *network, ctx);
  }
  if (!ctx.ok()) fail();

  Scenario s{std::move(*network), std::move(*grid), uniform, std::move(bids->first),
             std::move(bids->second), std::nullopt, {}, std::move(experiments)};
  if (truth) {
    s.truth = std::move(truth->first);
    s.truth_sources = std::move(truth->second);
  }
  return s;
}

Scenario LoadScenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ScenarioError(path.string(), {{"io-error", "cannot open file", 0, ""}});
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseScenario(buffer.str(), path.string());
}

json SaveScenario(const Scenario& s) {
  json doc;
  json areas = json::array();
  for (const AreaId& a : s.network.areas()) areas.push_back(a.name);
  doc["areas"] = areas;
  json links = json::array();
  for (const auto& l : s.network.links()) {
    links.push_back({{"id", l.id.name}, {"ends", {l.first.name, l.second.name}}});
  }
  doc["links"] = links;
  if (s.uniform_grid && s.grid.num_links() > 0) {
    doc["grid"] = {{"values", s.grid.values(0)}, {"default", s.grid.default_value(0)}};
  } else {
    json grid = json::object();
    for (std::size_t k = 0; k < s.grid.num_links(); ++k) {
      grid[s.network.link(k).name] = {{"values", s.grid.values(k)},
                                      {"default", s.grid.default_value(k)}};
    }
    doc["grid"] = grid;
  }
  doc["bids"] = SaveProfile(s.bids, s.bid_sources, s.network);
  if (s.truth) doc["truth"] = SaveProfile(*s.truth, s.truth_sources, s.network);

  const ExperimentConfig& x = s.experiments;
  if (x != ExperimentConfig{}) {
    json e = json::object();
    if (x.seed) e["seed"] = *x.seed;
    if (x.samples) e["samples"] = *x.samples;
    if (x.ranges) {
      e["ranges"] = {{"quadratic", {x.ranges->quadratic_lo, x.ranges->quadratic_hi}},
                     {"cross", {x.ranges->cross_lo, x.ranges->cross_hi}}};
    }
    if (x.coalition) e["coalition"] = *x.coalition;
    if (x.scale) e["scale"] = *x.scale;
    if (x.epsilon_bar) e["epsilon_bar"] = *x.epsilon_bar;
    doc["experiments"] = e;
  }
  return doc;
}

std::string ScenarioDigest(const Scenario& scenario) {
  const std::string text = SaveScenario(scenario).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rxmarket
