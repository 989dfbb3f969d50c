#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>
#include <stdexcept>
#include <string>

#include "cfdim/construction.hpp"
#include "cfdim/cylinder.hpp"
#include "cfdim/dyadic_bridge.hpp"
#include "cfdim/gales.hpp"
#include "cfdim/measure.hpp"
#include "cfdim/suites.hpp"

using namespace cfdim;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "s=0.4,K=3"
void parse_schedule(const std::string& text, RunConfig& cfg) {
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t comma = text.find(',', start);
    std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("bad schedule item '" + item + "'");
    std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    try {
      if (key == "s") {
        cfg.schedule_s = parse_rational(value);
      } else if (key == "K" || key == "k") {
        Integer k = parse_integer(value);
        if (k < 1 || k > 64) throw UsageError("bad schedule depth '" + value + "'");
        cfg.schedule_depth = k.get_ui();
      } else {
        throw UsageError("bad schedule key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw UsageError("bad schedule value '" + value + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
}

CFWord parse_cf(const std::string& text) {
  try {
    return CFWord::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

DyadicWord parse_bits(const std::string& text) {
  if (text == "λ" || text == "-") return DyadicWord();
  for (char c : text) {
    if (c != '0' && c != '1') throw UsageError("bad bit string '" + text + "'");
  }
  return DyadicWord(text);
}

Integer parse_digit(const std::string& text) {
  try {
    Integer z = parse_integer(text);
    if (z < 1) throw std::invalid_argument("");
    return z;
  } catch (const std::invalid_argument&) {
    throw UsageError("bad digit '" + text + "'");
  }
}

std::string with_precision(const Enclosure& e) { return e.str() + " @ " + std::to_string(e.precision()); }

nlohmann::json verdict_json(const Verdict& v) {
  return {{"claim", v.claim}, {"status", to_string(v.status)}, {"lo", v.lo},
          {"hi", v.hi},       {"precision", v.precision},      {"detail", v.detail}};
}

std::string verdict_line(const Verdict& v) {
  std::string s = to_string(v.status) + "  " + v.claim + "  [" + v.lo + ", " + v.hi + "]";
  if (!v.detail.empty()) s += "  (" + v.detail + ")";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cfdim: certified continued-fraction and dyadic gale computations"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string format = "text";
  std::string truncation = "10000";
  std::string schedule;
  app.add_option("--precision", cfg.precision, "working precision in bits")->check(CLI::Range(16L, 1L << 20));
  app.add_option("--seed", cfg.seed, "seed for randomized corpora");
  app.add_option("--truncation", truncation, "children checked term by term in gale conditions");
  app.add_option("--nmax", cfg.n_max, "explicit terms of the smoothed gale series")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--max-doublings", cfg.max_doublings, "precision doublings before a check is indeterminate")
      ->check(CLI::Range(0, 10));
  app.add_option("--schedule", schedule, "digit schedule, e.g. s=0.4,K=3");
  app.add_flag("--allow-large", cfg.allow_large, "allow term-by-term sums over more than 10^5 terms");
  app.add_flag("--quick", cfg.quick, "reduced corpora");
  app.add_flag("--timing", cfg.timing, "record per-claim wall time (reports are no longer reproducible)");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "suite name or 'all'")->required();

  std::string cf, code, bits, from, to;
  bool gauss_flag = false, compact = false;
  auto* encode = app.add_subcommand("encode", "prefix-free binary code of a continued-fraction word");
  encode->add_option("--cf", cf, "digits, e.g. 2,3")->required();
  encode->add_flag("--compact", compact, "use the fixed-width encoder");

  auto* decode_cmd = app.add_subcommand("decode", "continued-fraction word of a binary code");
  decode_cmd->add_option("code", code, "bit string")->required();

  auto* divide_cmd = app.add_subcommand("divide", "decompose a dyadic cylinder into continued-fraction pieces");
  divide_cmd->add_option("--word", bits, "bit string ('-' for the empty word)")->required();

  auto* measure = app.add_subcommand("measure", "Lebesgue and Gauss measures of a cylinder or fan");
  measure->add_option("--cf", cf, "digits of v")->required();
  measure->add_option("--from", from, "first digit of Fan(v, from, to)");
  measure->add_option("--to", to, "last digit of the fan (omit for infinity)");
  measure->add_flag("--gauss", gauss_flag, "also print the Gauss measure enclosure");
  std::string power;
  measure->add_option("--power-sum", power, "sum of gamma^p over the fan members, e.g. 1/2");

  std::string s_gale = "gauss";
  std::size_t depth = 3;
  auto* walk = app.add_subcommand("walk", "greedy digit walk keeping a 1/2-gale's capital decaying");
  walk->add_option("--s-gale", s_gale, "gale to walk against")->check(CLI::IsMember({"gauss"}));
  walk->add_option("--depth", depth, "number of digits")->check(CLI::Range(1, 64));

  long n = 0;
  auto* construct = app.add_subcommand("construct", "digit schedule, level covers and cover gale");
  construct->add_option("--n", n, "cover gale index n (k = ceil(2^(1+s+n)))")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    try {
      cfg.truncation = parse_integer(truncation);
    } catch (const std::invalid_argument&) {
      throw UsageError("bad truncation '" + truncation + "'");
    }
    if (!schedule.empty()) parse_schedule(schedule, cfg);
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const CertifyOptions opts = cfg.certify();
    const bool json = format == "json";

    if (*verify) {
      if (!is_suite(suite)) throw UsageError("unknown suite '" + suite + "'");
      Report r = run_suite(suite, cfg);
      if (format == "text") {
        for (const auto& c : r.claims) {
          std::cout << to_string(c.status) << "  " << c.id << "  " << c.detail << '\n';
        }
        std::cout << r.count(Status::kProved) << " proved, " << r.count(Status::kRefuted) << " refuted, "
                  << r.count(Status::kIndeterminate) << " indeterminate\n";
      } else {
        std::cout << render(r, format);
      }
      return r.ok() ? 0 : 1;
    }

    if (*encode) {
      CFWord v = parse_cf(cf);
      if (compact) {
        std::vector<std::uint64_t> d;
        for (const auto& x : v.digits()) {
          if (!x.fits_ulong_p()) throw UsageError("digit too large for --compact '" + to_string(x) + "'");
          d.push_back(x.get_ui());
        }
        auto c = encode_compact(d);
        if (!c) throw UsageError("word outside the fixed-width range; drop --compact");
        DyadicWord prefix = DyadicWord::from_index(Integer(static_cast<unsigned long>(c->index)), c->length);
        Encoding e{prefix, c->tag};
        std::cout << (json ? nlohmann::json{{"cf", v.str()}, {"code", e.code()}}.dump() : e.code()) << '\n';
        return 0;
      }
      Encoding e = encode_full(v);
      if (json) {
        std::cout << nlohmann::json{{"cf", v.str()}, {"prefix", e.prefix.bits()}, {"tag", e.tag}, {"code", e.code()}}
                         .dump()
                  << '\n';
      } else {
        std::cout << e.code() << '\n';
      }
      return 0;
    }

    if (*decode_cmd) {
      CFWord v;
      try {
        v = decode(code);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      std::cout << (json ? nlohmann::json{{"code", code}, {"cf", v.str()}}.dump() : v.str()) << '\n';
      return 0;
    }

    if (*divide_cmd) {
      DyadicWord w = parse_bits(bits);
      Decomposition d = divide(w);
      Rational total = 0;
      nlohmann::json parts = nlohmann::json::array();
      for (const auto& p : d.parts) {
        total += piece_lebesgue(p);
        parts.push_back({{"piece", piece_str(p)}, {"lebesgue", to_string(piece_lebesgue(p))}});
        if (!json) std::cout << piece_str(p) << "  " << to_string(piece_lebesgue(p)) << '\n';
      }
      if (json) {
        std::cout << nlohmann::json{{"word", w.bits()}, {"parts", parts}, {"total", to_string(total)}}.dump(2) << '\n';
      } else {
        std::cout << "total " << to_string(total) << '\n';
      }
      return 0;
    }

    if (*measure) {
      CFWord v = parse_cf(cf);
      if (from.empty()) {
        if (!to.empty()) throw UsageError("--to requires --from");
        Rational mu = lebesgue(v);
        if (json) {
          nlohmann::json j{{"cf", v.str()}, {"lebesgue", to_string(mu)}};
          if (gauss_flag) j["gauss"] = with_precision(gauss(v, cfg.precision));
          std::cout << j.dump() << '\n';
        } else {
          std::cout << to_string(mu) << '\n';
          if (gauss_flag) std::cout << with_precision(gauss(v, cfg.precision)) << '\n';
        }
        return 0;
      }
      Fan f(v, parse_digit(from), to.empty() ? std::optional<Integer>() : std::optional<Integer>(parse_digit(to)));
      if (f.to && *f.to < f.from) throw UsageError("empty fan '" + f.str() + "'");
      Rational mu = lebesgue(f);
      nlohmann::json j{{"fan", f.str()}, {"lebesgue", to_string(mu)}};
      if (!json) std::cout << to_string(mu) << '\n';
      if (gauss_flag) {
        std::string g = with_precision(gauss(f, cfg.precision));
        j["gauss"] = g;
        if (!json) std::cout << g << '\n';
      }
      if (!power.empty()) {
        Rational p;
        try {
          p = parse_rational(power);
        } catch (const std::invalid_argument&) {
          throw UsageError("bad exponent '" + power + "'");
        }
        if (f.infinite()) throw UsageError("--power-sum needs a finite fan");
        std::string sum;
        try {
          sum = with_precision(gauss_power_sum(f, p, cfg.precision, cfg.allow_large));
        } catch (const std::length_error& e) {
          throw UsageError(std::string(e.what()) + " (use --allow-large)");
        }
        j["power_sum"] = sum;
        if (!json) std::cout << sum << '\n';
      }
      if (json) std::cout << j.dump() << '\n';
      return 0;
    }

    if (*walk) {
      Schedule sched = build_schedule(cfg.schedule_s, cfg.schedule_depth);
      if (depth > sched.depth()) throw UsageError("--depth exceeds the schedule depth K");
      CFGalePtr d = gauss_gale(Rational(1, 2));
      Walk w = diagonal_walk(*d, sched, depth, opts);
      if (json) {
        nlohmann::json steps = nlohmann::json::array();
        for (const auto& s : w.steps) steps.push_back(verdict_json(s));
        nlohmann::json trace = nlohmann::json::array();
        for (std::size_t i = 0; i < w.trace.path.size(); ++i) {
          trace.push_back({{"prefix", w.trace.path[i]}, {"capital", with_precision(w.trace.values[i])}});
        }
        std::cout << nlohmann::json{{"gale", d->describe()},
                                    {"digits", w.path.str()},
                                    {"constant", with_precision(growth_constant(cfg.precision))},
                                    {"steps", steps},
                                    {"trace", trace},
                                    {"decay", verdict_json(w.decay)}}
                         .dump(2)
                  << '\n';
      } else {
        std::cout << "digits " << w.path.str() << '\n';
        for (std::size_t i = 0; i < w.trace.path.size(); ++i) {
          std::cout << "d(" << w.trace.path[i] << ") = " << with_precision(w.trace.values[i]) << '\n';
        }
        for (const auto& s : w.steps) std::cout << verdict_line(s) << '\n';
        std::cout << verdict_line(w.decay) << '\n';
      }
      return w.decay.proved() ? 0 : 1;
    }

    if (*construct) {
      Schedule sched = build_schedule(cfg.schedule_s, cfg.schedule_depth);
      nlohmann::json levels = nlohmann::json::array();
      bool ok = true;
      if (!json) std::cout << "s = " << to_string(sched.s) << '\n';
      for (std::size_t k = 1; k <= sched.depth(); ++k) {
        LevelMass m = level_cover_mass(sched, k, opts);
        BinaryLevel b = binary_level_cover(sched, k, opts);
        ok = ok && !m.verdict.refuted() && !b.verdict.refuted();
        nlohmann::json j{{"k", k},
                         {"a", to_string(sched.lower(k))},
                         {"b", to_string(sched.upper(k))},
                         {"members", to_string(m.members)},
                         {"analytic_mass", with_precision(m.analytic)},
                         {"mass", verdict_json(m.verdict)},
                         {"binary_mass", with_precision(b.mass)},
                         {"binary", verdict_json(b.verdict)}};
        if (m.enumerated) j["enumerated_mass"] = with_precision(*m.enumerated);
        if (b.words) j["binary_words"] = b.words->size();
        levels.push_back(j);
        if (!json) {
          std::cout << "k=" << k << "  a_k=" << to_string(sched.lower(k)) << "  b_k=" << to_string(sched.upper(k))
                    << "  |S_k|=" << to_string(m.members) << '\n';
          std::cout << "  " << verdict_line(m.verdict) << '\n';
          std::cout << "  " << verdict_line(b.verdict) << '\n';
        }
      }
      nlohmann::json out{{"s", to_string(sched.s)}, {"levels", levels}};
      try {
        Counterexample c = counterexample_gale(sched, n, opts);
        ok = ok && !c.initial_capital.refuted();
        out["gale"] = {{"n", n}, {"k", c.k}, {"describe", c.gale->describe()}, {"initial_capital", verdict_json(c.initial_capital)}};
        if (!json) std::cout << "gale 2^" << n << " d_B" << c.k << "  " << verdict_line(c.initial_capital) << '\n';
      } catch (const std::invalid_argument& e) {
        out["gale"] = {{"n", n}, {"error", e.what()}};
        if (!json) std::cout << "gale: " << e.what() << '\n';
      }
      if (json) std::cout << out.dump(2) << '\n';
      return ok ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
