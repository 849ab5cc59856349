#include "mleak/cipher.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mleak/error.hpp"
#include "mleak/random.hpp"
#include "mleak/rate_distortion.hpp"

namespace mleak {

namespace {

std::vector<unsigned> digits(std::uint64_t index, unsigned n, std::size_t base) {
  std::vector<unsigned> d(n);
  for (unsigned i = 0; i < n; ++i) {
    d[i] = static_cast<unsigned>(index % base);
    index /= base;
  }
  return d;
}

std::uint64_t ipow(std::uint64_t b, unsigned e, std::uint64_t limit) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (out > limit / b) return limit + 1;
    out *= b;
  }
  return out;
}

unsigned ceil_log2(std::uint64_t v) {
  unsigned s = 0;
  while ((std::uint64_t{1} << s) < v) ++s;
  return s;
}

// Enumerates x^n of composition `counts` within total distortion `budget` of y.
class BallWalker {
 public:
  BallWalker(const Matrix& d, unsigned n, const std::vector<unsigned>& counts)
      : d_(d), n_(n), counts_(counts), pow_(n, 1) {
    for (unsigned i = 1; i < n; ++i) pow_[i] = pow_[i - 1] * d.rows();
  }

  template <class F>
  void walk(const std::vector<unsigned>& y, double budget, F&& visit) {
    left_ = counts_;
    rec(y, 0, 0, 0.0, budget, visit);
  }

 private:
  template <class F>
  void rec(const std::vector<unsigned>& y, unsigned pos, std::uint64_t idx, double acc, double budget, F& visit) {
    if (pos == n_) {
      visit(idx);
      return;
    }
    for (std::size_t a = 0; a < d_.rows(); ++a) {
      if (left_[a] == 0) continue;
      double na = acc + d_(a, y[pos]);
      if (na > budget) continue;
      --left_[a];
      rec(y, pos + 1, idx + a * pow_[pos], na, budget, visit);
      ++left_[a];
    }
  }

  const Matrix& d_;
  unsigned n_;
  std::vector<unsigned> counts_, left_;
  std::vector<std::uint64_t> pow_;
};

std::uint64_t pack(const std::vector<unsigned>& v, std::size_t base) {
  std::uint64_t out = 0, m = 1;
  for (unsigned s : v) {
    out += s * m;
    m *= base;
  }
  return out;
}

}  // namespace

void CipherScheme::index_types() {
  const auto& p = params_.source;
  if (params_.n == 0) throw Error(ErrorKind::InvalidParameter, "block length must be positive");
  params_.spec.validate();
  if (params_.spec.d.rows() != p.size()) throw Error(ErrorKind::LabelMismatch, "distortion rows vs |X|");
  if (!(params_.key_rate_bits >= 0.0)) throw Error(ErrorKind::InvalidParameter, "key rate must be >= 0");
  if (!(params_.alpha_bits >= 0.0) || !(params_.delta_bits >= 0.0))
    throw Error(ErrorKind::InvalidParameter, "alpha and delta must be >= 0");
  num_x_ = ipow(p.size(), params_.n, params_.cap);
  if (num_x_ > params_.cap) throw Error(ErrorKind::SizeCapExceeded, "|X|^n above the enumeration cap");
  if (ipow(params_.spec.d.cols(), params_.n, std::uint64_t{1} << 62) > (std::uint64_t{1} << 62))
    throw Error(ErrorKind::SizeCapExceeded, "|Y|^n does not fit an index");
  double nr = static_cast<double>(params_.n) * params_.key_rate_bits;
  key_bits_ = static_cast<unsigned>(std::ceil(nr - 1e-9));
  if (key_bits_ > 30) throw Error(ErrorKind::SizeCapExceeded, "more than 30 key bits");

  types_ = enumerate_types(params_.n, p);
  std::map<std::vector<unsigned>, std::uint32_t> lookup;
  feasible_.assign(types_.size(), false);
  for (std::size_t t = 0; t < types_.size(); ++t) {
    lookup.emplace(types_[t].counts, static_cast<std::uint32_t>(t));
    double kl_bits = types_[t].kl / kLn2;
    feasible_[t] = std::isfinite(kl_bits) && (std::isinf(params_.alpha_bits) ||
                                              kl_bits <= params_.alpha_bits + params_.delta_bits + 1e-12);
  }
  type_of_.resize(num_x_);
  for (std::uint64_t x = 0; x < num_x_; ++x) type_of_[x] = lookup.at(composition_of(x, params_.n, p.size()));
}

void CipherScheme::assign_from_codebooks() {
  const unsigned n = params_.n;
  const double budget = static_cast<double>(n) * params_.spec.level + 1e-9;
  slot_of_.assign(num_x_, -1);
  for (std::size_t t = 0; t < types_.size(); ++t) {
    if (!feasible_[t]) continue;
    BallWalker walker(params_.spec.d, n, types_[t].counts);
    for (std::size_t c = 0; c < codebooks_[t].size(); ++c) {
      auto y = digits(codebooks_[t][c], n, params_.spec.d.cols());
      walker.walk(y, budget, [&](std::uint64_t x) {
        if (slot_of_[x] < 0) slot_of_[x] = static_cast<std::int64_t>(c);
      });
    }
  }
  for (std::uint64_t x = 0; x < num_x_; ++x)
    if (feasible_[type_of_[x]] && slot_of_[x] < 0)
      throw Error(ErrorKind::CoverageFailure, "sequence " + std::to_string(x) + " not covered");
}

CipherScheme CipherScheme::from_codebooks(const CipherParams& params,
                                          std::vector<std::vector<std::uint64_t>> codebooks) {
  CipherScheme s;
  s.params_ = params;
  s.index_types();
  if (codebooks.size() != s.types_.size()) throw Error(ErrorKind::LabelMismatch, "one codebook per type");
  s.codebooks_ = std::move(codebooks);
  s.assign_from_codebooks();
  return s;
}

CipherScheme CipherScheme::build(const CipherParams& params) {
  CipherScheme s;
  s.params_ = params;
  s.index_types();
  const auto& spec = s.params_.spec;
  if (spec.level < spec.d_min() - 1e-12) throw Error(ErrorKind::Infeasible, "D below D_min");

  const unsigned n = s.params_.n;
  const std::size_t nx = s.params_.source.size(), ny = spec.d.cols();
  const double dist_budget = static_cast<double>(n) * spec.level + 1e-9;
  s.codebooks_.assign(s.types_.size(), {});

  std::vector<std::int32_t> local(s.num_x_, -1);
  int worst_attempt = 1;
  for (std::size_t t = 0; t < s.types_.size(); ++t) {
    if (!s.feasible_[t]) continue;
    std::vector<std::uint64_t> members;
    for (std::uint64_t x = 0; x < s.num_x_; ++x)
      if (s.type_of_[x] == t) {
        local[x] = static_cast<std::int32_t>(members.size());
        members.push_back(x);
      }
    double r_bits = rate_distortion(s.types_[t].q, spec.d, spec.level) / kLn2;
    double budget = std::ceil(std::exp2(static_cast<double>(n) * (r_bits + s.params_.budget_slack_bits)) - 1e-9);
    int cands = std::max(1, s.params_.candidates);
    BallWalker walker(spec.d, n, s.types_[t].counts);

    bool done = false;
    for (int attempt = 0; attempt <= s.params_.retries && !done; ++attempt) {
      Rng rng = make_rng(s.params_.seed, (static_cast<std::uint64_t>(t) << 8) + static_cast<std::uint64_t>(attempt));
      std::vector<char> covered(members.size(), 0);
      std::size_t remaining = members.size(), cursor = 0;
      std::vector<std::uint64_t> book;
      while (remaining > 0 && static_cast<double>(book.size()) < budget) {
        while (covered[cursor]) ++cursor;
        auto x0 = digits(members[cursor], n, nx);
        std::vector<unsigned> base(n);
        double base_dist = 0.0;
        for (unsigned i = 0; i < n; ++i) {
          unsigned b = 0;
          for (unsigned yv = 1; yv < ny; ++yv)
            if (spec.d(x0[i], yv) < spec.d(x0[i], b)) b = yv;
          base[i] = b;
          base_dist += spec.d(x0[i], b);
        }
        std::vector<unsigned> best = base;
        std::size_t best_gain = 0;
        for (int c = 0; c < cands; ++c) {
          std::vector<unsigned> y = base;
          double dist = base_dist;
          if (c > 0) {
            auto moves = 1 + rng() % n;
            for (std::uint64_t m = 0; m < moves; ++m) {
              auto i = static_cast<unsigned>(rng() % n);
              auto b = static_cast<unsigned>(rng() % ny);
              double nd = dist - spec.d(x0[i], y[i]) + spec.d(x0[i], b);
              if (nd <= dist_budget) {
                dist = nd;
                y[i] = b;
              }
            }
          }
          std::size_t gain = 0;
          walker.walk(y, dist_budget, [&](std::uint64_t x) {
            if (!covered[static_cast<std::size_t>(local[x])]) ++gain;
          });
          if (gain > best_gain) {
            best_gain = gain;
            best = y;
          }
        }
        walker.walk(best, dist_budget, [&](std::uint64_t x) {
          auto& f = covered[static_cast<std::size_t>(local[x])];
          if (!f) {
            f = 1;
            --remaining;
          }
        });
        book.push_back(pack(best, ny));
      }
      if (remaining == 0) {
        s.codebooks_[t] = std::move(book);
        worst_attempt = std::max(worst_attempt, attempt + 1);
        done = true;
      } else {
        budget *= 2.0;
        cands *= 2;
      }
    }
    if (!done) throw Error(ErrorKind::CoverageFailure, "type " + std::to_string(t) + " not covered within budget");
  }
  s.attempts_ = worst_attempt;
  s.assign_from_codebooks();
  return s;
}

std::size_t CipherScheme::bins(std::size_t t) const {
  const std::uint64_t b = bin_size();
  return static_cast<std::size_t>((codebooks_[t].size() + b - 1) / b);
}

unsigned CipherScheme::bin_key_bits(std::size_t t, std::size_t i) const {
  const std::uint64_t b = bin_size();
  std::uint64_t start = static_cast<std::uint64_t>(i) * b;
  std::uint64_t size = std::min<std::uint64_t>(b, codebooks_[t].size() - start);
  return ceil_log2(size);
}

Message CipherScheme::encode(std::uint64_t x, std::uint64_t key) const {
  if (x >= num_x_) throw Error(ErrorKind::InvalidParameter, "sequence index out of range");
  Message m;
  std::uint32_t t = type_of_[x];
  if (!feasible_[t]) {
    m.dummy = true;
    return m;
  }
  auto slot = static_cast<std::uint64_t>(slot_of_[x]);
  std::uint64_t i = slot >> key_bits_, j = slot & (bin_size() - 1);
  unsigned s = bin_key_bits(t, i);
  m.type = t;
  m.bin = static_cast<std::uint32_t>(i);
  m.masked = static_cast<std::uint32_t>(j ^ (key & ((std::uint64_t{1} << s) - 1)));
  return m;
}

std::uint64_t CipherScheme::decode(const Message& m, std::uint64_t key) const {
  if (m.dummy) return dummy_output();
  unsigned s = bin_key_bits(m.type, m.bin);
  std::uint64_t j = m.masked ^ (key & ((std::uint64_t{1} << s) - 1));
  std::uint64_t slot = (static_cast<std::uint64_t>(m.bin) << key_bits_) + j;
  if (slot >= codebooks_[m.type].size()) throw Error(ErrorKind::InvalidParameter, "message outside the codebook");
  return codebooks_[m.type][slot];
}

std::uint64_t CipherScheme::dummy_output() const {
  const Matrix& d = params_.spec.d;
  std::size_t best = 0;
  double best_worst = kInf;
  for (std::size_t y = 0; y < d.cols(); ++y) {
    double worst = 0.0;
    for (std::size_t x = 0; x < d.rows(); ++x) worst = std::max(worst, d(x, y));
    if (worst < best_worst) {
      best_worst = worst;
      best = y;
    }
  }
  std::uint64_t out = 0;
  for (unsigned i = 0; i < params_.n; ++i) out = out * d.cols() + best;
  return out;
}

std::uint64_t CipherScheme::codeword_of(std::uint64_t x) const {
  if (slot_of_.at(x) < 0) throw Error(ErrorKind::InvalidParameter, "sequence maps to the dummy message");
  return codebooks_[type_of_[x]][static_cast<std::size_t>(slot_of_[x])];
}

double CipherScheme::sequence_distortion(std::uint64_t x, std::uint64_t y) const {
  auto xd = digits(x, params_.n, params_.source.size());
  auto yd = digits(y, params_.n, params_.spec.d.cols());
  double s = 0.0;
  for (unsigned i = 0; i < params_.n; ++i) s += params_.spec.d(xd[i], yd[i]);
  return s / params_.n;
}

LeakageValue exact_scheme_leakage(const CipherScheme& s) {
  double total = 0.0;
  bool dummy_used = false;
  for (std::size_t t = 0; t < s.types().size(); ++t) {
    if (s.feasible(t)) total += static_cast<double>(s.bins(t));
    else if (s.types()[t].prob > 0.0) dummy_used = true;
  }
  if (dummy_used) total += 1.0;
  return LeakageValue::nats(std::log(total));
}

LeakageValue brute_force_scheme_leakage(const CipherScheme& s) {
  const std::uint64_t keys = std::uint64_t{1} << s.key_bits();
  if (s.num_sequences() > (std::uint64_t{1} << 24) / keys)
    throw Error(ErrorKind::SizeCapExceeded, "brute force limited to 2^24 (sequence, key) pairs");
  const unsigned n = s.params().n;
  const auto& p = s.params().source;
  std::map<Message, double> best;
  std::map<Message, std::uint64_t> local;
  for (std::uint64_t x = 0; x < s.num_sequences(); ++x) {
    auto c = composition_of(x, n, p.size());
    bool positive = true;
    for (std::size_t a = 0; a < p.size(); ++a)
      if (c[a] > 0 && p[a] <= 0.0) positive = false;
    if (!positive) continue;
    local.clear();
    for (std::uint64_t k = 0; k < keys; ++k) ++local[s.encode(x, k)];
    for (const auto& [m, cnt] : local) {
      double pm = static_cast<double>(cnt) / static_cast<double>(keys);
      auto& b = best[m];
      b = std::max(b, pm);
    }
  }
  double total = 0.0;
  for (const auto& [m, v] : best) total += v;
  return LeakageValue::nats(std::log(total));
}

double excess_distortion_prob(const CipherScheme& s) {
  const std::uint64_t y0 = s.dummy_output();
  const double level = s.params().spec.level;
  double e = 0.0;
  for (std::uint64_t x = 0; x < s.num_sequences(); ++x) {
    const TypeClass& t = s.types()[s.type_of(x)];
    if (s.feasible(s.type_of(x)) || t.prob <= 0.0) continue;
    if (s.sequence_distortion(x, y0) > level + 1e-12) e += t.prob * std::exp(-t.log_size);
  }
  return e;
}

}  // namespace mleak
