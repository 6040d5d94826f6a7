// heatcount CLI: thin adapter over the heatcount library. Parses flags,
// calls one library operation, and renders the result as JSON (default,
// byte-stable: fixed key order, reals at 12 significant digits) or as an
// aligned text table. Exit codes: 0 success, 1 domain error, 2 usage error,
// 3 consistency/internal error.

#include <cinttypes>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "heatcount/characters.hpp"
#include "heatcount/counting.hpp"
#include "heatcount/errors.hpp"
#include "heatcount/group.hpp"
#include "heatcount/heat.hpp"
#include "heatcount/lie.hpp"

namespace {

using heatcount::Complex;

// ---- scalar renderers ----

std::string fmt_real(double v) {
  if (!std::isfinite(v)) return v > 0 ? "\"inf\"" : (v < 0 ? "\"-inf\"" : "\"nan\"");
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_int(int64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%" PRId64, v);
  return buf;
}

std::string fmt_uint(uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%" PRIu64, v);
  return buf;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += "\"";
  return out;
}

std::string fmt_complex_json(const Complex& z) {
  return "[" + fmt_real(z.real()) + "," + fmt_real(z.imag()) + "]";
}

// re / re+im i with tiny imaginary parts suppressed (table output only)
std::string fmt_complex_table(const Complex& z) {
  if (std::abs(z.imag()) < 1e-9) return fmt_real(z.real());
  std::string s = fmt_real(z.real());
  s += z.imag() < 0 ? "-" : "+";
  s += fmt_real(std::abs(z.imag()));
  s += "i";
  return s;
}

// ---- JSON composition (pre-rendered values, insertion order preserved) ----

using KV = std::pair<std::string, std::string>;

std::string jobj(const std::vector<KV>& kv) {
  std::string out = "{";
  for (size_t i = 0; i < kv.size(); ++i) {
    if (i) out += ",";
    out += json_escape(kv[i].first) + ":" + kv[i].second;
  }
  out += "}";
  return out;
}

std::string jarr(const std::vector<std::string>& items) {
  std::string out = "[";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += items[i];
  }
  out += "]";
  return out;
}

template <typename T, typename F>
std::string jarr_of(const std::vector<T>& v, F render) {
  std::vector<std::string> items;
  items.reserve(v.size());
  for (const auto& x : v) items.push_back(render(x));
  return jarr(items);
}

// ---- table rendering ----

void print_matrix(const std::vector<std::vector<std::string>>& rows) {
  size_t cols = 0;
  for (const auto& r : rows) cols = std::max(cols, r.size());
  std::vector<size_t> width(cols, 0);
  for (const auto& r : rows)
    for (size_t j = 0; j < r.size(); ++j) width[j] = std::max(width[j], r[j].size());
  for (const auto& r : rows) {
    std::string line;
    for (size_t j = 0; j < r.size(); ++j) {
      std::string cell = r[j];
      if (j == 0) {
        cell.resize(width[0], ' ');  // left-align label column
      } else {
        cell.insert(0, width[j] - cell.size(), ' ');
      }
      if (j) line += "  ";
      line += cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    std::cout << line << "\n";
  }
}

void print_kv(const std::vector<KV>& kv) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [k, v] : kv) rows.push_back({k, v});
  print_matrix(rows);
}

// ---- flag-value parsing ----

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  if (text.empty()) return out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      size_t used = 0;
      long v = std::stol(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<int>(v));
    } catch (const std::exception&) {
      throw heatcount::UsageError("bad integer '" + item + "' in " + what);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  if (text.empty()) return out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw heatcount::UsageError("bad real '" + item + "' in " + what);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void check_format(const std::string& format) {
  if (format != "json" && format != "table")
    throw heatcount::UsageError("unknown format '" + format + "' (expected json or table)");
}

int check_class(const heatcount::FiniteGroup& g, int cls, const std::string& what) {
  if (cls < 0 || cls >= g.class_count())
    throw heatcount::UsageError(what + " index " + std::to_string(cls) + " out of range (group has " +
                                std::to_string(g.class_count()) + " classes)");
  return cls;
}

heatcount::Element check_element(const heatcount::FiniteGroup& g, int64_t e, const std::string& what) {
  if (e < 0 || e >= g.order())
    throw heatcount::UsageError(what + " index " + std::to_string(e) + " out of range (group order " +
                                std::to_string(g.order()) + ")");
  return static_cast<heatcount::Element>(e);
}

// ---- shared fragments ----

std::vector<KV> count_result_kv(const heatcount::CountResult& r) {
  return {{"count", fmt_int(r.count)}, {"raw", fmt_real(r.raw)}, {"residue", fmt_real(r.residue)}};
}

std::vector<KV> series_kv(const heatcount::SeriesResult& r) {
  return {{"value", fmt_real(r.value)},
          {"terms_used", fmt_int(r.terms_used)},
          {"tail_bound", fmt_real(r.tail_bound)},
          {"cutoff", json_escape(r.cutoff)},
          {"conditionally_convergent", fmt_bool(r.conditionally_convergent)}};
}

void emit(const std::string& format, const std::vector<KV>& kv) {
  if (format == "json") {
    std::cout << jobj(kv) << "\n";
  } else {
    print_kv(kv);
  }
}

std::string root_tag(heatcount::RootSystemType t) {
  return t == heatcount::RootSystemType::A1 ? "A1" : "A2";
}

std::vector<heatcount::Subgroup> build_subgroups(const heatcount::FiniteGroup& g,
                                                 const std::vector<std::string>& gen_lists) {
  std::vector<heatcount::Subgroup> subs;
  for (const auto& text : gen_lists) {
    std::vector<heatcount::Element> gens;
    for (int v : parse_int_list(text, "--subgroup"))
      gens.push_back(check_element(g, v, "subgroup generator"));
    subs.push_back(heatcount::subgroup_from_generators(g, gens));
  }
  return subs;
}

std::string subgroups_json(const std::vector<heatcount::Subgroup>& subs) {
  return jarr_of(subs, [](const heatcount::Subgroup& h) {
    return jobj({{"generators", jarr_of(h.generators, [](heatcount::Element e) {
                    return fmt_int(e);
                  })},
                 {"order", fmt_int(h.order())}});
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heatcount: exact character-sum counts on finite groups, finite heat kernels, "
               "and SU(2)/SU(3) series for volumes and commutator densities"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);

  std::string format = "json";
  uint64_t seed = 0;
  int threads = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));

  // finite-group subcommand options
  std::string o_group, o_punctures, o_weights, o_word, o_gens, o_times_str;
  std::vector<std::string> o_subgroups;
  std::string o_export, o_import, o_family;
  int o_genus = 0, o_target = 0, o_n = 2;
  int64_t o_x = 0, o_y = 0;
  int64_t o_cap = 100000000;
  double o_t = 0.0;

  // Lie subcommand options
  std::string o_root, o_point, o_slots;
  std::vector<std::string> o_points;
  double o_s = 2.0, o_tol = 1e-6, o_lt = 0.0, o_model_t = 0.0;
  int64_t o_max_terms = 0, o_samples = 0;
  int o_lgenus = 1, o_ln = 2, o_quad = 256, o_bins = 50;
  bool o_identity_map = false, o_weyl = false;

  auto add_std = [&](CLI::App* sc) {
    sc->add_option("--format", format, "output format: json|table (default json)");
    sc->add_option("--threads", threads, "worker threads for parallel operations");
    sc->add_option("--seed", seed, "random seed (used by mc)");
  };

  CLI::App* c_count = app.add_subcommand(
      "count", "solutions of [a1,b1]...[ag,bg] z1...zn = target via the character formula");
  c_count->add_option("--group", o_group, "group spec, e.g. symmetric:3")->required();
  c_count->add_option("--genus", o_genus, "number of commutator pairs (g >= 0)");
  c_count->add_option("--punctures", o_punctures, "comma list of conjugacy-class indices");
  c_count->add_option("--target", o_target, "target conjugacy-class index (default identity)");
  add_std(c_count);

  CLI::App* c_push = app.add_subcommand(
      "pushforward", "surface-count for every target class at once");
  c_push->add_option("--group", o_group, "group spec")->required();
  c_push->add_option("--genus", o_genus, "number of commutator pairs");
  c_push->add_option("--punctures", o_punctures, "comma list of conjugacy-class indices");
  add_std(c_push);

  CLI::App* c_ncomm = app.add_subcommand(
      "ncomm", "solutions of the left-nested commutator [[v1,v2],...,vn] = target");
  c_ncomm->add_option("--group", o_group, "group spec")->required();
  c_ncomm->add_option("--n", o_n, "number of variables (n >= 2)")->required();
  c_ncomm->add_option("--target", o_target, "target conjugacy-class index");
  add_std(c_ncomm);

  CLI::App* c_subs = app.add_subcommand(
      "subgroups", "solutions of (g1 h1 g1^-1)...(gn hn gn^-1) = e, hj in the j-th subgroup");
  c_subs->add_option("--group", o_group, "group spec")->required();
  c_subs->add_option("--subgroup", o_subgroups,
                     "comma list of generator element indices; repeat once per factor")
      ->required();
  add_std(c_subs);

  CLI::App* c_square = app.add_subcommand(
      "square", "solutions of x^2 [a1,b1]...[ag,bg] = e");
  c_square->add_option("--group", o_group, "group spec")->required();
  c_square->add_option("--genus", o_genus, "number of commutator pairs");
  add_std(c_square);

  CLI::App* c_klein = app.add_subcommand(
      "klein", "solutions of w z w^-1 z [a1,b1]...[ag,bg] = e");
  c_klein->add_option("--group", o_group, "group spec")->required();
  c_klein->add_option("--genus", o_genus, "number of commutator pairs");
  add_std(c_klein);

  CLI::App* c_weighted = app.add_subcommand(
      "weighted", "surface count weighted by characters of the commutator b-handles");
  c_weighted->add_option("--group", o_group, "group spec")->required();
  c_weighted->add_option("--genus", o_genus, "number of commutator pairs");
  c_weighted->add_option("--weights", o_weights, "comma list of irrep indices (at most genus)")
      ->required();
  c_weighted->add_option("--punctures", o_punctures, "comma list of conjugacy-class indices");
  c_weighted->add_option("--target", o_target, "target conjugacy-class index");
  add_std(c_weighted);

  CLI::App* c_oracle = app.add_subcommand(
      "oracle", "exhaustive count of solutions of a word equation");
  c_oracle->add_option("--group", o_group, "group spec")->required();
  c_oracle->add_option("--word", o_word,
                       "word equation, e.g. 'x1*y1*inv(x1)*inv(y1) => 0'")
      ->required();
  c_oracle->add_option("--subgroup", o_subgroups,
                       "generator list for u-variables; repeat once per subgroup");
  c_oracle->add_option("--cap", o_cap, "maximum number of assignments to enumerate");
  add_std(c_oracle);

  CLI::App* c_chart = app.add_subcommand(
      "chartable", "complex character table with certification");
  c_chart->add_option("--group", o_group, "group spec")->required();
  c_chart->add_option("--export", o_export, "write the table as CSV to this path");
  c_chart->add_option("--import", o_import, "read a previously exported CSV and re-certify");
  add_std(c_chart);

  CLI::App* c_heat = app.add_subcommand(
      "heat", "finite heat kernel H(t,x,y), or heat-damped counts over a time sequence");
  c_heat->add_option("--group", o_group, "group spec")->required();
  c_heat->add_option("--t", o_t, "time (point evaluation mode)");
  c_heat->add_option("--x", o_x, "element index (default identity)");
  c_heat->add_option("--y", o_y, "element index (default identity)");
  c_heat->add_option("--gens", o_gens,
                     "comma list of generator element indices (inverse-closed); default canonical");
  c_heat->add_option("--times", o_times_str, "comma list of times (damped-count mode)");
  c_heat->add_option("--family", o_family, "damped-count family: surface|ncomm|subgroups");
  c_heat->add_option("--genus", o_genus, "genus for --family surface");
  c_heat->add_option("--punctures", o_punctures, "puncture classes for --family surface");
  c_heat->add_option("--target", o_target, "target class for --family surface|ncomm");
  c_heat->add_option("--n", o_n, "variable count for --family ncomm");
  c_heat->add_option("--subgroup", o_subgroups, "subgroup generators for --family subgroups");
  add_std(c_heat);

  CLI::App* c_zeta = app.add_subcommand(
      "zeta", "Witten zeta partial sum: sum over dominant weights of dim^-s");
  c_zeta->add_option("--root", o_root, "root system: A1|A2")->required();
  c_zeta->add_option("--s", o_s, "exponent")->required();
  c_zeta->add_option("--tol", o_tol, "target tail bound (auto mode)");
  c_zeta->add_option("--max-terms", o_max_terms, "explicit term budget (0 = auto)");
  add_std(c_zeta);

  CLI::App* c_vol = app.add_subcommand(
      "volume", "regularized moduli-volume series with its closed-form prefactor");
  c_vol->add_option("--root", o_root, "root system: A1|A2")->required();
  c_vol->add_option("--genus", o_lgenus, "surface genus (g >= 2)")->required();
  c_vol->add_option("--point", o_points,
                    "marked-point torus element, e.g. A1:theta=1.0; repeatable");
  c_vol->add_option("--t", o_lt, "heat-kernel regularization time (default 0)");
  c_vol->add_option("--tol", o_tol, "target tail bound");
  add_std(c_vol);

  CLI::App* c_dens = app.add_subcommand(
      "density", "push-forward densities on the maximal torus (commutator map by default)");
  c_dens->add_option("--root", o_root, "root system: A1|A2")->required();
  c_dens->add_option("--point", o_point, "evaluation point, e.g. A1:theta=1.0")->required();
  c_dens->add_option("--genus", o_lgenus, "number of commutator pairs (default 1)");
  c_dens->add_option("--t", o_lt, "heat-kernel regularization time (default 0)");
  c_dens->add_option("--tol", o_tol, "target tail bound");
  c_dens->add_option("--slots", o_slots,
                     "conjugated-subgroup slots (torus|full|trivial, comma list) instead of "
                     "the commutator map");
  c_dens->add_option("--ncomm", o_ln, "iterated-commutator depth (A1 torus quadrature, t > 0)");
  c_dens->add_option("--quad-points", o_quad, "quadrature points for --ncomm (>= 200)");
  add_std(c_dens);

  CLI::App* c_van = app.add_subcommand(
      "vanishing", "spectral sum sum_lambda dim * chi(c) * exp(-t p) along decreasing times");
  c_van->add_option("--root", o_root, "root system: A1|A2")->required();
  c_van->add_option("--point", o_point, "torus point c")->required();
  c_van->add_option("--times", o_times_str, "strictly decreasing positive times, comma list")
      ->required();
  c_van->add_option("--tol", o_tol, "target tail bound per time");
  add_std(c_van);

  CLI::App* c_mc = app.add_subcommand(
      "mc", "Monte-Carlo histogram of SU(2) commutator angles (deterministic per seed)");
  c_mc->add_option("--samples", o_samples, "number of samples (>= 10000)")->required();
  c_mc->add_option("--bins", o_bins, "uniform bins over [0, pi] (default 50)");
  c_mc->add_flag("--identity-map", o_identity_map,
                 "histogram a single Haar element instead of a commutator");
  c_mc->add_option("--model-t", o_model_t,
                   "also emit commutator-density model bin masses at this time");
  c_mc->add_flag("--weyl", o_weyl, "also emit Weyl-measure bin masses");
  c_mc->add_option("--tol", o_tol, "tail tolerance for --model-t masses");
  add_std(c_mc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << jobj({{"error", jobj({{"type", json_escape("usage")},
                                       {"message", json_escape(e.what())}})}})
              << "\n";
    return 2;
  }

  try {
    check_format(format);
    if (threads < 1) throw heatcount::UsageError("--threads must be positive");

    if (c_count->parsed()) {
      auto table = heatcount::character_table(heatcount::build_group(o_group));
      std::vector<int> punctures = parse_int_list(o_punctures, "--punctures");
      for (int c : punctures) check_class(table.group, c, "puncture class");
      check_class(table.group, o_target, "target class");
      auto r = heatcount::count_surface(table, o_genus, punctures, o_target);
      std::vector<KV> kv = count_result_kv(r);
      kv.push_back({"group", json_escape(table.group.description())});
      kv.push_back({"genus", fmt_int(o_genus)});
      kv.push_back({"punctures", jarr_of(punctures, [](int c) { return fmt_int(c); })});
      kv.push_back({"target", fmt_int(o_target)});
      emit(format, kv);

    } else if (c_push->parsed()) {
      auto table = heatcount::character_table(heatcount::build_group(o_group));
      std::vector<int> punctures = parse_int_list(o_punctures, "--punctures");
      for (int c : punctures) check_class(table.group, c, "puncture class");
      auto rows = heatcount::pushforward_counts(table, o_genus, punctures);
      int64_t sum = 0;
      for (size_t i = 0; i < rows.size(); ++i)
        sum += rows[i].count * table.group.classes()[i].size();
      if (format == "json") {
        std::vector<std::string> items;
        for (size_t i = 0; i < rows.size(); ++i) {
          const auto& cls = table.group.classes()[i];
          std::vector<KV> kv = {{"class", fmt_int(static_cast<int64_t>(i))},
                                {"representative", fmt_int(cls.representative)},
                                {"size", fmt_int(cls.size())}};
          for (auto& p : count_result_kv(rows[i])) kv.push_back(p);
          items.push_back(jobj(kv));
        }
        emit(format, {{"group", json_escape(table.group.description())},
                      {"genus", fmt_int(o_genus)},
                      {"punctures", jarr_of(punctures, [](int c) { return fmt_int(c); })},
                      {"counts", jarr(items)},
                      {"total", fmt_int(sum)}});
      } else {
        std::vector<std::vector<std::string>> m = {
            {"class", "rep", "size", "count", "raw", "residue"}};
        for (size_t i = 0; i < rows.size(); ++i) {
          const auto& cls = table.group.classes()[i];
          m.push_back({fmt_int(static_cast<int64_t>(i)), fmt_int(cls.representative),
                       fmt_int(cls.size()), fmt_int(rows[i].count), fmt_real(rows[i].raw),
                       fmt_real(rows[i].residue)});
        }
        m.push_back({"total", "", "", fmt_int(sum), "", ""});
        print_matrix(m);
      }

    } else if (c_ncomm->parsed()) {
      auto table = heatcount::character_table(heatcount::build_group(o_group));
      check_class(table.group, o_target, "target class");
      auto r = heatcount::count_n_commutator(table, o_n, o_target);
      std::vector<KV> kv = count_result_kv(r);
      kv.push_back({"group", json_escape(table.group.description())});
      kv.push_back({"n", fmt_int(o_n)});
      kv.push_back({"target", fmt_int(o_target)});
      emit(format, kv);

    } else if (c_subs->parsed()) {
      auto table = heatcount::character_table(heatcount::build_group(o_group));
      auto subs = build_subgroups(table.group, o_subgroups);
      auto r = heatcount::count_conjugate_subgroup_product(table, subs);
      std::vector<KV> kv = count_result_kv(r);
      kv.push_back({"group", json_escape(table.group.description())});
      if (format == "json") {
        kv.push_back({"subgroups", subgroups_json(subs)});
        emit(format, kv);
      } else {
        for (size_t i = 0; i < subs.size(); ++i)
          kv.push_back({"subgroup " + std::to_string(i) + " order", fmt_int(subs[i].order())});
        print_kv(kv);
      }

    } else if (c_square->parsed() || c_klein->parsed()) {
      auto table = heatcount::character_table(heatcount::build_group(o_group));
      auto r = c_square->parsed() ? heatcount::count_with_square(table, o_genus)
                                  : heatcount::count_klein(table, o_genus);
      std::vector<KV> kv = count_result_kv(r);
      kv.push_back({"group", json_escape(table.group.description())});
      kv.push_back({"genus", fmt_int(o_genus)});
      emit(format, kv);

    } else if (c_weighted->parsed()) {
      auto table = heatcount::character_table(heatcount::build_group(o_group));
      std::vector<int> weights = parse_int_list(o_weights, "--weights");
      for (int w : weights)
        if (w < 0 || w >= table.irrep_count())
          throw heatcount::UsageError("weight irrep index " + std::to_string(w) +
                                      " out of range (table has " +
                                      std::to_string(table.irrep_count()) + " irreps)");
      std::vector<int> punctures = parse_int_list(o_punctures, "--punctures");
      for (int c : punctures) check_class(table.group, c, "puncture class");
      check_class(table.group, o_target, "target class");
      auto r = heatcount::weighted_count(table, o_genus, weights, punctures, o_target);
      std::vector<KV> kv = {{"value", format == "json" ? fmt_complex_json(r.value)
                                                       : fmt_complex_table(r.value)},
                            {"residue", fmt_real(r.residue)},
                            {"group", json_escape(table.group.description())},
                            {"genus", fmt_int(o_genus)},
                            {"weights", jarr_of(weights, [](int w) { return fmt_int(w); })},
                            {"punctures", jarr_of(punctures, [](int c) { return fmt_int(c); })},
                            {"target", fmt_int(o_target)}};
      emit(format, kv);

    } else if (c_oracle->parsed()) {
      auto group = heatcount::build_group(o_group);
      auto eq = heatcount::parse_word(o_word);
      for (const auto& letter : eq.letters)
        if (letter.var < 0) check_element(group, letter.constant, "word constant");
      for (const auto& v : eq.variables)
        if (v.family == 'z') check_element(group, v.constraint, "class-constraint element");
      check_element(group, eq.target, "word target");
      auto subs = build_subgroups(group, o_subgroups);
      heatcount::BruteForceOptions opts;
      opts.cap = o_cap;
      opts.threads = threads;
      int64_t n = heatcount::brute_force_count(group, eq, subs, opts);
      emit(format, {{"count", fmt_int(n)},
                    {"group", json_escape(group.description())},
                    {"word", json_escape(o_word)},
                    {"cap", fmt_int(o_cap)},
                    {"subgroups", subgroups_json(subs)}});

    } else if (c_chart->parsed()) {
      auto group = heatcount::build_group(o_group);
      heatcount::CharacterTable table = o_import.empty()
                                            ? heatcount::character_table(group)
                                            : heatcount::read_character_table_csv(group, o_import);
      if (!o_export.empty()) heatcount::write_character_table_csv(table, o_export);
      if (format == "json") {
        std::vector<std::string> class_items;
        for (int i = 0; i < group.class_count(); ++i) {
          const auto& cls = group.classes()[i];
          class_items.push_back(jobj({{"index", fmt_int(i)},
                                      {"representative", fmt_int(cls.representative)},
                                      {"size", fmt_int(cls.size())}}));
        }
        std::string classes = jarr(class_items);
        std::string irreps = jarr_of(table.irreps, [](const heatcount::Irrep& ir) {
          return jobj({{"label", json_escape(ir.label)},
                       {"dim", fmt_int(ir.dim)},
                       {"values", jarr_of(ir.values, fmt_complex_json)}});
        });
        emit(format, {{"group", json_escape(group.description())},
                      {"order", fmt_int(group.order())},
                      {"classes", classes},
                      {"irreps", irreps}});
      } else {
        std::vector<std::vector<std::string>> m;
        std::vector<std::string> head = {"class"}, reps = {"rep"}, sizes = {"size"};
        for (int i = 0; i < group.class_count(); ++i) {
          head.push_back(std::to_string(i));
          reps.push_back(fmt_int(group.classes()[i].representative));
          sizes.push_back(fmt_int(group.classes()[i].size()));
        }
        m.push_back(head);
        m.push_back(reps);
        m.push_back(sizes);
        for (const auto& ir : table.irreps) {
          std::vector<std::string> row = {ir.label + " (d=" + std::to_string(ir.dim) + ")"};
          for (const auto& z : ir.values) row.push_back(fmt_complex_table(z));
          m.push_back(row);
        }
        print_matrix(m);
      }

    } else if (c_heat->parsed()) {
      auto table = heatcount::character_table(heatcount::build_group(o_group));
      std::vector<heatcount::Element> gens;
      if (o_gens.empty()) {
        gens = table.group.canonical_generators();
      } else {
        for (int v : parse_int_list(o_gens, "--gens"))
          gens.push_back(check_element(table.group, v, "generator"));
      }
      auto weight = heatcount::cayley_weight(table, gens);
      double gap = heatcount::spectral_gap(table, weight);
      bool family_mode = c_heat->count("--times") > 0;
      if (family_mode == (c_heat->count("--t") > 0))
        throw heatcount::UsageError("give exactly one of --t (point mode) or --times (damped-count mode)");
      if (!family_mode) {
        heatcount::Element x = check_element(table.group, o_x, "--x");
        heatcount::Element y = check_element(table.group, o_y, "--y");
        double v = heatcount::heat_kernel(table, weight, o_t, x, y);
        emit(format, {{"value", fmt_real(v)},
                      {"t", fmt_real(o_t)},
                      {"x", fmt_int(x)},
                      {"y", fmt_int(y)},
                      {"weight", json_escape(weight.provenance)},
                      {"gap", fmt_real(gap)},
                      {"group", json_escape(table.group.description())}});
      } else {
        std::vector<double> times = parse_real_list(o_times_str, "--times");
        std::vector<Complex> terms;
        int64_t exact = 0;
        std::vector<KV> params;
        if (o_family == "surface") {
          std::vector<int> punctures = parse_int_list(o_punctures, "--punctures");
          for (int c : punctures) check_class(table.group, c, "puncture class");
          check_class(table.group, o_target, "target class");
          terms = heatcount::surface_terms(table, o_genus, punctures, o_target);
          exact = heatcount::count_surface(table, o_genus, punctures, o_target).count;
          params = {{"genus", fmt_int(o_genus)},
                    {"punctures", jarr_of(punctures, [](int c) { return fmt_int(c); })},
                    {"target", fmt_int(o_target)}};
        } else if (o_family == "ncomm") {
          check_class(table.group, o_target, "target class");
          terms = heatcount::n_commutator_terms(table, o_n, o_target);
          exact = heatcount::count_n_commutator(table, o_n, o_target).count;
          params = {{"n", fmt_int(o_n)}, {"target", fmt_int(o_target)}};
        } else if (o_family == "subgroups") {
          auto subs = build_subgroups(table.group, o_subgroups);
          terms = heatcount::conjugate_subgroup_terms(table, subs);
          exact = heatcount::count_conjugate_subgroup_product(table, subs).count;
          params = {{"subgroups", subgroups_json(subs)}};
        } else {
          throw heatcount::UsageError("--times requires --family surface|ncomm|subgroups");
        }
        std::vector<double> values = heatcount::heat_damped_counts(table, weight, terms, times);
        std::vector<double> envelopes;
        for (double t : times)
          envelopes.push_back(heatcount::heat_damping_envelope(table, weight, terms, t));
        std::vector<KV> kv = {{"family", json_escape(o_family)},
                              {"exact", fmt_int(exact)},
                              {"times", jarr_of(times, fmt_real)},
                              {"values", jarr_of(values, fmt_real)},
                              {"envelopes", jarr_of(envelopes, fmt_real)},
                              {"gap", fmt_real(gap)},
                              {"weight", json_escape(weight.provenance)},
                              {"group", json_escape(table.group.description())}};
        for (auto& p : params) kv.push_back(p);
        if (format == "json") {
          emit(format, kv);
        } else {
          std::vector<std::vector<std::string>> m = {{"t", "value", "envelope"}};
          for (size_t i = 0; i < times.size(); ++i)
            m.push_back({fmt_real(times[i]), fmt_real(values[i]), fmt_real(envelopes[i])});
          m.push_back({"exact", fmt_int(exact), ""});
          print_matrix(m);
        }
      }

    } else if (c_zeta->parsed()) {
      auto rs = heatcount::root_system(heatcount::parse_root_system(o_root));
      auto r = heatcount::witten_zeta_partial(rs, o_s, o_tol, o_max_terms);
      std::vector<KV> kv = series_kv(r);
      kv.push_back({"root", json_escape(root_tag(rs.type))});
      kv.push_back({"s", fmt_real(o_s)});
      kv.push_back({"tol", fmt_real(o_tol)});
      kv.push_back({"max_terms", fmt_int(o_max_terms)});
      emit(format, kv);

    } else if (c_vol->parsed()) {
      auto rs = heatcount::root_system(heatcount::parse_root_system(o_root));
      std::vector<heatcount::TorusPoint> marked;
      for (const auto& text : o_points) marked.push_back(heatcount::parse_torus_point(text));
      auto r = heatcount::moduli_volume_series(rs, o_lgenus, marked, o_lt, o_tol);
      std::vector<KV> kv = {{"volume", fmt_real(r.volume)},
                            {"prefactor", fmt_real(r.prefactor)},
                            {"complex_dim", fmt_real(r.complex_dim)},
                            {"central_marked_point", fmt_bool(r.central_marked_point)}};
      if (format == "json") {
        kv.push_back({"series", jobj(series_kv(r.series))});
      } else {
        for (auto& p : series_kv(r.series)) kv.push_back({"series." + p.first, p.second});
      }
      kv.push_back({"root", json_escape(root_tag(rs.type))});
      kv.push_back({"genus", fmt_int(o_lgenus)});
      kv.push_back({"t", fmt_real(o_lt)});
      kv.push_back({"tol", fmt_real(o_tol)});
      kv.push_back({"points", format == "json"
                                  ? jarr_of(o_points, json_escape)
                                  : std::to_string(o_points.size()) + " marked"});
      emit(format, kv);

    } else if (c_dens->parsed()) {
      auto rs = heatcount::root_system(heatcount::parse_root_system(o_root));
      auto x = heatcount::parse_torus_point(o_point);
      bool slots_mode = c_dens->count("--slots") > 0;
      bool ncomm_mode = c_dens->count("--ncomm") > 0;
      if (slots_mode && ncomm_mode)
        throw heatcount::UsageError("--slots and --ncomm are mutually exclusive");
      if (ncomm_mode) {
        double v = heatcount::lie_n_commutator_density(rs, o_ln, x, o_lt, o_quad, o_tol);
        emit(format, {{"value", fmt_real(v)},
                      {"mode", json_escape("ncomm")},
                      {"n", fmt_int(o_ln)},
                      {"quad_points", fmt_int(o_quad)},
                      {"root", json_escape(root_tag(rs.type))},
                      {"point", json_escape(o_point)},
                      {"t", fmt_real(o_lt)},
                      {"tol", fmt_real(o_tol)}});
      } else {
        heatcount::SeriesResult r;
        std::vector<KV> extra;
        if (slots_mode) {
          std::vector<heatcount::SlotKind> slots;
          std::vector<std::string> tags;
          size_t pos = 0;
          while (pos <= o_slots.size()) {
            size_t comma = o_slots.find(',', pos);
            std::string tag =
                o_slots.substr(pos, comma == std::string::npos ? comma : comma - pos);
            slots.push_back(heatcount::parse_slot(tag));
            tags.push_back(tag);
            if (comma == std::string::npos) break;
            pos = comma + 1;
          }
          r = heatcount::subgroup_pushforward_density(rs, slots, x, o_lt, o_tol);
          extra = {{"mode", json_escape("subgroups")},
                   {"slots", format == "json" ? jarr_of(tags, json_escape)
                                              : o_slots}};
        } else {
          r = heatcount::commutator_density(rs, x, o_lgenus, o_lt, o_tol);
          extra = {{"mode", json_escape("commutator")}, {"genus", fmt_int(o_lgenus)}};
        }
        std::vector<KV> kv = series_kv(r);
        for (auto& p : extra) kv.push_back(p);
        kv.push_back({"root", json_escape(root_tag(rs.type))});
        kv.push_back({"point", json_escape(o_point)});
        kv.push_back({"t", fmt_real(o_lt)});
        kv.push_back({"tol", fmt_real(o_tol)});
        emit(format, kv);
      }

    } else if (c_van->parsed()) {
      auto rs = heatcount::root_system(heatcount::parse_root_system(o_root));
      auto c = heatcount::parse_torus_point(o_point);
      std::vector<double> times = parse_real_list(o_times_str, "--times");
      auto r = heatcount::vanishing_limit(rs, c, times, o_tol);
      if (format == "json") {
        std::string values = jarr_of(r.values, [](const heatcount::SeriesResult& s) {
          return jobj(series_kv(s));
        });
        emit(format, {{"values", values},
                      {"at_identity", fmt_bool(r.at_identity)},
                      {"root", json_escape(root_tag(rs.type))},
                      {"point", json_escape(o_point)},
                      {"times", jarr_of(times, fmt_real)},
                      {"tol", fmt_real(o_tol)}});
      } else {
        std::vector<std::vector<std::string>> m = {{"t", "value", "tail_bound", "terms"}};
        for (size_t i = 0; i < times.size(); ++i)
          m.push_back({fmt_real(times[i]), fmt_real(r.values[i].value),
                       fmt_real(r.values[i].tail_bound), fmt_int(r.values[i].terms_used)});
        m.push_back({"at_identity", fmt_bool(r.at_identity), "", ""});
        print_matrix(m);
      }

    } else if (c_mc->parsed()) {
      auto h = heatcount::mc_commutator_histogram(seed, o_samples, o_bins, threads,
                                                  o_identity_map);
      bool with_model = c_mc->count("--model-t") > 0;
      std::string model = "null";
      std::string weyl = "null";
      if (with_model)
        model = jarr_of(heatcount::a1_commutator_bin_masses(o_bins, o_model_t, o_tol), fmt_real);
      if (o_weyl) weyl = jarr_of(heatcount::weyl_measure_bin_masses(o_bins), fmt_real);
      if (format == "json") {
        emit(format, {{"counts", jarr_of(h.counts, fmt_int)},
                      {"samples", fmt_int(h.samples)},
                      {"bins", fmt_int(o_bins)},
                      {"seed", fmt_uint(h.seed)},
                      {"identity_map", fmt_bool(o_identity_map)},
                      {"model_t", with_model ? fmt_real(o_model_t) : "null"},
                      {"model_masses", model},
                      {"weyl_masses", weyl}});
      } else {
        std::vector<std::vector<std::string>> m = {{"bin", "count"}};
        if (with_model) m[0].push_back("model");
        if (o_weyl) m[0].push_back("weyl");
        std::vector<double> model_v =
            with_model ? heatcount::a1_commutator_bin_masses(o_bins, o_model_t, o_tol)
                       : std::vector<double>();
        std::vector<double> weyl_v =
            o_weyl ? heatcount::weyl_measure_bin_masses(o_bins) : std::vector<double>();
        for (size_t i = 0; i < h.counts.size(); ++i) {
          std::vector<std::string> row = {fmt_int(static_cast<int64_t>(i)),
                                          fmt_int(h.counts[i])};
          if (with_model) row.push_back(fmt_real(model_v[i]));
          if (o_weyl) row.push_back(fmt_real(weyl_v[i]));
          m.push_back(row);
        }
        m.push_back({"samples", fmt_int(h.samples)});
        print_matrix(m);
      }
    }

    return 0;
  } catch (const heatcount::UsageError& e) {
    std::cerr << jobj({{"error", jobj({{"type", json_escape("usage")},
                                       {"message", json_escape(e.what())}})}})
              << "\n";
    return 2;
  } catch (const heatcount::DomainError& e) {
    std::cerr << jobj({{"error", jobj({{"type", json_escape("domain")},
                                       {"message", json_escape(e.what())}})}})
              << "\n";
    return 1;
  } catch (const heatcount::ConsistencyError& e) {
    std::cerr << jobj({{"error", jobj({{"type", json_escape("consistency")},
                                       {"message", json_escape(e.what())}})}})
              << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << jobj({{"error", jobj({{"type", json_escape("internal")},
                                       {"message", json_escape(e.what())}})}})
              << "\n";
    return 3;
  }
}
