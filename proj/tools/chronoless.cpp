// Copyright 2026 The Chronoless Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// chronoless: validate, evaluate and transform network documents.
//
// Exit codes: 0 success, 1 invariant failure, 2 usage or parse error,
// 3 null event.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chronoless/document.hpp"
#include "json.hpp"

namespace {

using namespace chronoless;

enum Exit { kOk = 0, kInvariant = 1, kUsage = 2, kNull = 3 };

struct InvariantFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed(double v, int digits) {
  if (std::abs(v) < 0.5 * std::pow(10.0, -digits)) v = 0;  // no "-0.000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DocumentError("cannot write '" + path + "'");
  out << text;
}

NetworkDocument load(const std::string& path) { return parse_document(read_file(path)); }

void require_valid(const NetworkDocument& doc, double tol) {
  const auto issues = check_document(doc, tol);
  if (issues.empty()) return;
  std::ostringstream ss;
  for (const auto& i : issues) ss << i.where << ": " << i.message << "\n";
  throw InvariantFailure(ss.str());
}

// Slots of nodes with more than one outcome; all slots if there are none.
std::vector<std::size_t> shown_slots(const Network& net) {
  std::vector<std::size_t> out;
  std::size_t k = 0;
  for (const auto& [id, op] : net.nodes()) {
    if (op.size() > 1) out.push_back(k);
    ++k;
  }
  if (out.empty())
    for (std::size_t i = 0; i < net.nodes().size(); ++i) out.push_back(i);
  return out;
}

std::string tuple_text(const std::vector<std::string>& tuple, const std::vector<std::size_t>& slots) {
  std::string s;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (k) s += ',';
    s += tuple[slots[k]];
  }
  return s;
}

int cmd_validate(const std::string& path, double tol) {
  const auto doc = load(path);
  const auto issues = check_document(doc, tol);
  for (const auto& n : doc.nodes) {
    bool bad = false;
    for (const auto& i : issues) bad = bad || i.where == "node '" + n.id + "'";
    std::cout << "node " << n.id << ": " << (bad ? "FAIL" : "ok") << "\n";
  }
  for (const auto& i : issues) std::cout << "  " << i.where << ": " << i.message << "\n";
  if (!issues.empty()) return kInvariant;
  // Residuals of the imported boundary forms.
  const Network net = build_network(doc);
  for (const auto& [id, op] : net.nodes())
    std::cout << "residual " << id << " " << validate_boundary(op, tol).trace_residual << "\n";
  return kOk;
}

int cmd_eval(const std::string& path, bool as_json, double tol) {
  const auto doc = load(path);
  require_valid(doc, tol);
  const Network net = build_network(doc);
  const auto dist = evaluate_network(net);
  if (as_json) {
    nlohmann::ordered_json j;
    j["parties"] = dist.parties;
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& [tuple, p] : dist.entries)
      j["entries"].push_back({{"outcomes", tuple}, {"p", std::stod(fixed(p, 12))}});
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  const auto slots = shown_slots(net);
  for (const auto& [tuple, p] : dist.entries)
    std::cout << "p(" << tuple_text(tuple, slots) << ")=" << fixed(p, 12) << "\n";
  return kOk;
}

int cmd_process_op(const std::string& path, std::vector<std::string> select, const std::string& out,
                   double tol) {
  const auto doc = load(path);
  select.erase(std::remove(select.begin(), select.end(), ""), select.end());
  if (select.empty()) select = doc.selections;
  if (select.empty()) throw CLI::ValidationError("--select", "selection is empty");
  require_valid(doc, tol);
  const Network net = build_network(doc);
  const std::set<std::string> selected(select.begin(), select.end());
  for (const auto& id : selected)
    if (!net.has_node(id)) throw CLI::ValidationError("--select", "unknown node '" + id + "'");
  const ProcessOperator w = process_operator_for(net, selected);

  // Round trip: W against the selected operations reproduces the marginal
  // of the full network.
  std::vector<BoundaryOperation> ops;
  for (const auto& p : w.parties) ops.push_back(net.node(p.node));
  const auto from_w = probabilities_from_process(w, ops);
  const auto full = evaluate_network(net);
  std::vector<std::size_t> slots;
  for (const auto& p : w.parties)
    slots.push_back(static_cast<std::size_t>(
        std::find(full.parties.begin(), full.parties.end(), p.node) - full.parties.begin()));
  std::map<std::vector<std::string>, double> marginal;
  for (const auto& [tuple, p] : full.entries) {
    std::vector<std::string> key;
    for (auto s : slots) key.push_back(tuple[s]);
    marginal[key] += p;
  }
  double dev = 0;
  for (const auto& [tuple, p] : from_w.entries) dev = std::max(dev, std::abs(p - marginal[tuple]));
  if (dev > 1e-9) throw InvariantFailure("process operator does not reproduce the network statistics");

  write_output(out, serialize_process(w));
  return kOk;
}

int cmd_reverse(const std::string& path, const std::string& out) {
  write_output(out, serialize_document(reverse_document(load(path))));
  return kOk;
}

int cmd_signal(const std::string& path, const std::string& families_path) {
  const ProcessOperator w = parse_process(read_file(path));
  if (!w.is_valid()) throw InvariantFailure("process operator is not unit-trace PSD");
  const auto families = parse_families(read_file(families_path), w);
  const auto rep = signaling_strength(w, families);
  for (const auto& choice : rep.incompatible) {
    std::cout << "incompatible:";
    for (std::size_t k = 0; k < choice.size(); ++k)
      std::cout << " " << w.parties[k].node << "[" << choice[k] << "]";
    std::cout << "\n";
  }
  if (rep.evaluated == 0) throw IncompatibleNetwork();
  for (const auto& [dir, s] : rep.directions)
    std::cout << dir.first << " -> " << dir.second << " " << fixed(s, 6) << "\n";
  return kOk;
}

int cmd_sample(const std::string& path, std::uint64_t seed, std::size_t count, double tol) {
  const auto doc = load(path);
  require_valid(doc, tol);
  const Network net = build_network(doc);
  const auto slots = shown_slots(net);
  std::string text;
  for (const auto& t : sample_outcomes(net, seed, count)) text += tuple_text(t, slots) + "\n";
  std::cout << text;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate operational networks without a fixed time direction."};
  app.require_subcommand(1);

  std::string path, out, families;
  double tol = kPsdTolerance;
  bool as_json = false, as_table = false;
  std::vector<std::string> select;
  std::uint64_t seed = 0;
  std::size_t count = 1;

  auto* validate = app.add_subcommand("validate", "check a network document");
  validate->add_option("path", path, "document")->required();
  validate->add_option("--tol", tol, "positivity and normalization tolerance");

  auto* eval = app.add_subcommand("eval", "print the outcome distribution");
  eval->add_option("path", path, "document")->required();
  auto* json_flag = eval->add_flag("--json", as_json, "JSON output");
  eval->add_flag("--table", as_table, "table output (default)")->excludes(json_flag);
  eval->add_option("--tol", tol, "validation tolerance");

  auto* process = app.add_subcommand("process-op", "extract the process operator of selected nodes");
  process->add_option("path", path, "document")->required();
  process->add_option("--select", select, "node ids")->delimiter(',');
  process->add_option("--out", out, "output file");
  process->add_option("--tol", tol, "validation tolerance");

  auto* reverse = app.add_subcommand("reverse", "time-reverse a sequential chain");
  reverse->add_option("path", path, "document")->required();
  reverse->add_option("--out", out, "output file");

  auto* signal = app.add_subcommand("signal", "signaling strengths of a process operator");
  signal->add_option("path", path, "process-operator document")->required();
  signal->add_option("--families", families, "operation families")->required();

  auto* sample = app.add_subcommand("sample", "draw outcome tuples");
  sample->add_option("path", path, "document")->required();
  sample->add_option("--seed", seed, "random seed");
  sample->add_option("--count", count, "number of samples");
  sample->add_option("--tol", tol, "validation tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(path, tol);
    if (*eval) return cmd_eval(path, as_json, tol);
    if (*process) return cmd_process_op(path, select, out, tol);
    if (*reverse) return cmd_reverse(path, out);
    if (*signal) return cmd_signal(path, families);
    if (*sample) return cmd_sample(path, seed, count, tol);
  } catch (const IncompatibleNetwork&) {
    std::cerr << "null event\n";
    return kNull;
  } catch (const InvariantFailure& e) {
    std::cerr << e.what();
    return kInvariant;
  } catch (const DocumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NetworkError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvariant;
  }
  return kUsage;
}
