#include "gsplan/lp.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>

#include "gsplan/error.hpp"

namespace gsplan {

using nlohmann::json;

int LinearProgram::add_var(std::string name, double obj) {
  var_names.push_back(std::move(name));
  objective.push_back(obj);
  return static_cast<int>(var_names.size()) - 1;
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

LinearProgram formulate(const Hypergraph& h, const QuantumNetwork& net) {
  const auto& params = net.params();
  LinearProgram lp;
  for (std::size_t e = 0; e < h.num_edges(); ++e) lp.add_var("e" + std::to_string(e));
  for (const auto& t : h.targets())
    for (int e : h.in(t.term)) lp.objective[static_cast<std::size_t>(e)] += t.weight;

  // capacity: attempts consumed at each endpoint of every link-generation edge
  std::map<NodeId, LpRow> cap;
  for (int e : h.out(h.start())) {
    const auto& edge = h.edges()[static_cast<std::size_t>(e)];
    const auto& s = h.vertices()[static_cast<std::size_t>(edge.head)].state;
    if (!net.has_link(s.x, s.y))
      fail(ErrorKind::invalid_edge, "link edge over a pair that is not a network link");
    const double per_ep = 1.0 / link_success(net, make_link(s.x, s.y));
    for (NodeId v : {s.x, s.y}) {
      auto& row = cap[v];
      row.coeffs.emplace_back(e, per_ep);
    }
  }
  for (auto& [v, row] : cap) {
    row.name = "cap_" + std::to_string(v);
    row.sense = RowSense::le;
    row.rhs = node_capacity(net, v);
    lp.rows.push_back(std::move(row));
  }

  for (std::size_t v = 0; v < h.num_vertices(); ++v) {
    const auto& hv = h.vertices()[v];
    if (hv.kind != VertexKind::avail && hv.kind != VertexKind::prod) continue;
    LpRow row;
    row.sense = RowSense::eq;
    double gain = 1.0;
    if (hv.kind == VertexKind::prod) {
      gain = params.op_gain(hv.fusion, hv.boundary);
      row.name = "p" + std::to_string(v);
    } else {
      row.name = "a" + std::to_string(v);
    }
    for (int e : h.in(static_cast<int>(v))) row.coeffs.emplace_back(e, gain);
    for (int e : h.out(static_cast<int>(v))) row.coeffs.emplace_back(e, -1.0);
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

// ---------------------------------------------------------------------------
// LP text format

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_terms(std::ostringstream& out, const std::vector<std::pair<int, double>>& terms,
                 const LinearProgram& lp, std::size_t indent) {
  std::size_t width = indent;
  bool first = true;
  for (auto [j, v] : terms) {
    std::string t;
    if (first) t = (v < 0 ? "-" : "") + num(std::abs(v)) + " " + lp.var_names[static_cast<std::size_t>(j)];
    else t = std::string(v < 0 ? "- " : "+ ") + num(std::abs(v)) + " " + lp.var_names[static_cast<std::size_t>(j)];
    if (width + t.size() + 1 > 200) {
      out << "\n   ";
      width = 3;
    } else if (!first) {
      out << ' ';
      ++width;
    }
    out << t;
    width += t.size();
    first = false;
  }
}

}  // namespace

std::string export_lp_text(const LinearProgram& lp) {
  std::ostringstream out;
  out << "\\ " << lp.num_vars() << " variables, " << lp.rows.size() << " constraints\n";
  out << "Maximize\n obj: ";
  std::vector<std::pair<int, double>> obj;
  for (std::size_t j = 0; j < lp.num_vars(); ++j)
    if (lp.objective[j] != 0.0) obj.emplace_back(static_cast<int>(j), lp.objective[j]);
  if (obj.empty()) out << "0";
  else write_terms(out, obj, lp, 6);
  out << "\nSubject To\n";
  for (const auto& row : lp.rows) {
    out << ' ' << row.name << ": ";
    if (row.coeffs.empty()) out << "0 " << lp.var_names.front();
    else write_terms(out, row.coeffs, lp, row.name.size() + 3);
    const char* op = row.sense == RowSense::le ? "<=" : row.sense == RowSense::ge ? ">=" : "=";
    out << ' ' << op << ' ' << num(row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& name : lp.var_names) out << ' ' << name << " >= 0\n";
  out << "End\n";
  return out.str();
}

namespace {

enum class Section { none, objective, constraints, bounds, end };

struct Token {
  enum Kind { word, number, op, colon, sign } kind;
  std::string text;
  double value = 0.0;
  int line = 0;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '\\') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == ':') {
      out.push_back({Token::colon, ":", 0.0, line});
      ++i;
    } else if (c == '+' || c == '-') {
      out.push_back({Token::sign, std::string(1, c), 0.0, line});
      ++i;
    } else if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      ++i;
      if (i < text.size() && (text[i] == '=' || text[i] == '<' || text[i] == '>')) op += text[i++];
      if (op == "=<") op = "<=";
      if (op == "=>") op = ">=";
      if (op == "<") op = "<=";
      if (op == ">") op = ">=";
      out.push_back({Token::op, op, 0.0, line});
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = std::stod(text.substr(i, 64), &used);
      out.push_back({Token::number, text.substr(i, used), v, line});
      i += used;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
             text[j] != ':' && text[j] != '<' && text[j] != '>' && text[j] != '=' &&
             text[j] != '+' && text[j] != '-')
        ++j;
      out.push_back({Token::word, text.substr(i, j - i), 0.0, line});
      i = j;
    }
  }
  return out;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

[[noreturn]] void parse_error(int line, const std::string& what) {
  fail(ErrorKind::io, "LP text line " + std::to_string(line) + ": " + what);
}

}  // namespace

LinearProgram parse_lp_text(const std::string& text) {
  const auto toks = tokenize(text);
  std::vector<std::string> names;
  std::unordered_map<std::string, int> index;
  auto var = [&](const std::string& name) {
    auto [it, fresh] = index.try_emplace(name, static_cast<int>(names.size()));
    if (fresh) names.push_back(name);
    return it->second;
  };
  std::vector<std::pair<int, double>> objective;
  std::vector<LpRow> rows;
  std::vector<int> bound_order;
  bool maximize = true;

  Section section = Section::none;
  std::size_t i = 0;
  auto is_section = [&](std::size_t k, Section& s) {
    if (toks[k].kind != Token::word) return false;
    const std::string w = lower(toks[k].text);
    if (w == "maximize" || w == "maximise" || w == "max") { s = Section::objective; maximize = true; return true; }
    if (w == "minimize" || w == "minimise" || w == "min") { s = Section::objective; maximize = false; return true; }
    if (w == "bounds") { s = Section::bounds; return true; }
    if (w == "end") { s = Section::end; return true; }
    if ((w == "subject" || w == "such") && k + 1 < toks.size() && lower(toks[k + 1].text) == "to") {
      s = Section::constraints;
      return true;
    }
    if (w == "st" || w == "s.t.") { s = Section::constraints; return true; }
    return false;
  };

  // Reads "[name:] terms" up to an operator or the next section/label.
  auto read_expr = [&](std::vector<std::pair<int, double>>& terms, std::string& label) {
    label.clear();
    if (i + 1 < toks.size() && toks[i].kind == Token::word && toks[i + 1].kind == Token::colon) {
      label = toks[i].text;
      i += 2;
    }
    double sign = 1.0;
    double coef = 1.0;
    bool have_coef = false;
    while (i < toks.size()) {
      const auto& t = toks[i];
      Section dummy;
      if (t.kind == Token::op) break;
      if (is_section(i, dummy)) break;
      if (t.kind == Token::word && i + 1 < toks.size() && toks[i + 1].kind == Token::colon) break;
      if (t.kind == Token::sign) {
        sign = t.text == "-" ? -sign : sign;
      } else if (t.kind == Token::number) {
        coef = t.value;
        have_coef = true;
      } else if (t.kind == Token::word) {
        terms.emplace_back(var(t.text), sign * coef);
        sign = 1.0;
        coef = 1.0;
        have_coef = false;
      } else {
        parse_error(t.line, "unexpected '" + t.text + "'");
      }
      ++i;
    }
    return have_coef ? sign * coef : 0.0;  // dangling constant (e.g. "obj: 0")
  };

  while (i < toks.size()) {
    Section next;
    if (is_section(i, next)) {
      section = next;
      i += (lower(toks[i].text) == "subject" || lower(toks[i].text) == "such") ? 2 : 1;
      if (section == Section::end) break;
      continue;
    }
    const int line = toks[i].line;
    switch (section) {
      case Section::none: parse_error(line, "expected an objective section");
      case Section::objective: {
        std::string label;
        read_expr(objective, label);
        break;
      }
      case Section::constraints: {
        LpRow row;
        read_expr(row.coeffs, row.name);
        if (i >= toks.size() || toks[i].kind != Token::op) parse_error(line, "constraint without a relation");
        const std::string op = toks[i++].text;
        row.sense = op == "<=" ? RowSense::le : op == ">=" ? RowSense::ge : RowSense::eq;
        double sign = 1.0;
        if (i < toks.size() && toks[i].kind == Token::sign) sign = toks[i++].text == "-" ? -1.0 : 1.0;
        if (i >= toks.size() || toks[i].kind != Token::number) parse_error(line, "constraint without a right-hand side");
        row.rhs = sign * toks[i++].value;
        if (row.name.empty()) row.name = "r" + std::to_string(rows.size());
        rows.push_back(std::move(row));
        break;
      }
      case Section::bounds: {
        if (toks[i].kind != Token::word) parse_error(line, "expected a variable in bounds");
        const std::string name = toks[i++].text;
        if (i + 1 >= toks.size() || toks[i].text != ">=" || toks[i + 1].kind != Token::number ||
            toks[i + 1].value != 0.0)
          parse_error(line, "only 'x >= 0' bounds are supported");
        i += 2;
        bound_order.push_back(var(name));
        break;
      }
      case Section::end: break;
    }
  }

  // Variables listed in Bounds define the column order when all are present.
  std::vector<int> order(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) order[k] = static_cast<int>(k);
  if (bound_order.size() == names.size()) order = bound_order;
  std::vector<int> pos(names.size());
  for (std::size_t k = 0; k < order.size(); ++k) pos[static_cast<std::size_t>(order[k])] = static_cast<int>(k);

  LinearProgram lp;
  for (int k : order) lp.add_var(names[static_cast<std::size_t>(k)]);
  for (auto [j, v] : objective) lp.objective[static_cast<std::size_t>(pos[static_cast<std::size_t>(j)])] += maximize ? v : -v;
  for (auto& row : rows) {
    std::vector<std::pair<int, double>> coeffs;
    for (auto [j, v] : row.coeffs)
      if (v != 0.0) coeffs.emplace_back(pos[static_cast<std::size_t>(j)], v);
    row.coeffs = std::move(coeffs);
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

json solution_to_json(const LpSolution& sol) {
  json j;
  j["status"] = to_string(sol.status);
  j["objective"] = sol.objective;
  j["max_residual"] = sol.max_residual;
  j["iterations"] = sol.iterations;
  json flows = json::object();
  for (std::size_t e = 0; e < sol.x.size(); ++e)
    if (sol.x[e] != 0.0) flows[std::to_string(e)] = sol.x[e];
  j["flows"] = std::move(flows);
  return j;
}

LpSolution solution_from_json(const json& j, std::size_t num_edges) {
  LpSolution sol;
  const std::string status = j.at("status").get<std::string>();
  if (status == "optimal") sol.status = LpStatus::optimal;
  else if (status == "infeasible") sol.status = LpStatus::infeasible;
  else if (status == "unbounded") sol.status = LpStatus::unbounded;
  else fail(ErrorKind::invalid_argument, "unknown solution status '" + status + "'");
  sol.objective = j.at("objective").get<double>();
  sol.max_residual = j.value("max_residual", 0.0);
  sol.iterations = j.value("iterations", 0);
  sol.x.assign(num_edges, 0.0);
  for (const auto& [key, value] : j.at("flows").items()) {
    const auto e = static_cast<std::size_t>(std::stoul(key));
    if (e >= num_edges) fail(ErrorKind::invalid_argument, "flow for unknown edge " + key);
    sol.x[e] = value.get<double>();
  }
  return sol;
}

}  // namespace gsplan
