#include "mleak_cli/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mleak/error.hpp"

namespace mleak::cli {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<double> number_list(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  std::vector<double> v;
  for (const auto& e : j) v.push_back(number(e, what));
  return v;
}

Matrix matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ParseError(std::string(what) + " must be a nonempty array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) rows.push_back(number_list(r, what));
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw ParseError(std::string(what) + " has ragged rows");
  return Matrix(rows);
}

std::vector<std::string> labels(const json& j, const char* key, std::size_t n) {
  if (!j.contains(key)) return default_labels(n);
  const json& a = j.at(key);
  if (!a.is_array()) throw ParseError(std::string(key) + " must be an array");
  std::vector<std::string> out;
  for (const auto& e : a) {
    if (!e.is_string()) throw ParseError(std::string(key) + " entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

void write_number(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "null";
  } else if (std::isinf(v)) {
    out += v > 0 ? "\"+inf\"" : "\"-inf\"";
  } else {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
    // Keep a float looking like a float after a round trip.
    if (std::string(buf).find_first_of(".eE") == std::string::npos) out += ".0";
  }
}

void write(std::string& out, const json& j, int indent, int depth) {
  auto pad = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        write(out, e, indent, depth + 1);
      }
      pad(depth);
      out += ']';
      return;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        out += json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(out, it.value(), indent, depth + 1);
      }
      pad(depth);
      out += '}';
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

json load_json(const std::string& path) { return parse_json_text(read_file(path), path); }

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string dump17(const json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  return out;
}

Distribution parse_distribution(const json& j) {
  if (!j.is_object()) throw ParseError("distribution must be a JSON object");
  const json& kind = field(j, "kind");
  if (!kind.is_string()) throw ParseError("kind must be a string");
  const std::string k = kind.get<std::string>();

  if (k == "joint") {
    Matrix p = matrix(field(j, "p"), "p");
    return JointPmf(labels(j, "x_labels", p.rows()), labels(j, "y_labels", p.cols()), std::move(p));
  }
  if (k == "channel") {
    Matrix w = matrix(field(j, "p"), "p");
    auto xl = labels(j, "x_labels", w.rows());
    Channel ch(xl, labels(j, "y_labels", w.cols()), std::move(w));
    Pmf px = j.contains("p_x") ? Pmf(xl, number_list(j.at("p_x"), "p_x"))
                               : Pmf(xl, std::vector<double>(ch.nx(), 1.0 / static_cast<double>(ch.nx())));
    return compose(px, ch);
  }
  if (k == "cond_joint") {
    const json& zs = field(j, "z");
    if (!zs.is_array() || zs.empty()) throw ParseError("z must be a nonempty array");
    std::vector<std::string> zl;
    std::vector<double> weights;
    std::vector<JointPmf> parts;
    for (const auto& z : zs) {
      const json& label = field(z, "label");
      zl.push_back(label.is_string() ? label.get<std::string>() : label.dump());
      weights.push_back(number(field(z, "weight"), "weight"));
      Matrix p = matrix(field(z, "p"), "p");
      parts.emplace_back(labels(j, "x_labels", p.rows()), labels(j, "y_labels", p.cols()), std::move(p));
    }
    return CondJointPmf(Pmf(zl, weights), std::move(parts));
  }
  throw ParseError("unknown kind '" + k + "'");
}

JointPmf parse_joint_only(const json& j) {
  Distribution d = parse_distribution(j);
  if (auto* p = std::get_if<JointPmf>(&d)) return *p;
  throw Error(ErrorKind::InvalidParameter, "this command needs a joint or channel distribution");
}

DistortionSpec parse_distortion(const json& j, double level) {
  if (!j.is_object()) throw ParseError("distortion must be a JSON object");
  DistortionSpec spec;
  if (j.contains("hamming")) {
    const json& n = j.at("hamming");
    if (!n.is_number_integer() || n.get<long long>() < 1) throw ParseError("hamming must be a positive integer");
    spec = DistortionSpec::hamming(n.get<std::size_t>(), level);
  } else {
    spec.d = matrix(field(j, "d"), "d");
    spec.level = level;
  }
  spec.validate();
  return spec;
}

CipherParams parse_cipher_params(const json& j) {
  if (!j.is_object()) throw ParseError("cipher params must be a JSON object");
  CipherParams c;
  const json& n = field(j, "n");
  if (!n.is_number_integer() || n.get<long long>() < 1) throw ParseError("n must be a positive integer");
  c.n = n.get<unsigned>();
  c.source = Pmf(number_list(field(j, "source"), "source"));
  double level = number(field(j, "D"), "D");
  c.spec = parse_distortion(field(j, "distortion"), level);
  c.key_rate_bits = number(field(j, "r_bits"), "r_bits");
  const json& a = field(j, "alpha_bits");
  if (a.is_string() && (a.get<std::string>() == "inf" || a.get<std::string>() == "+inf")) c.alpha_bits = kInf;
  else c.alpha_bits = number(a, "alpha_bits");
  if (j.contains("delta_bits")) c.delta_bits = number(j.at("delta_bits"), "delta_bits");
  if (j.contains("budget_slack_bits")) c.budget_slack_bits = number(j.at("budget_slack_bits"), "budget_slack_bits");
  if (j.contains("candidates")) c.candidates = j.at("candidates").get<int>();
  if (j.contains("retries")) c.retries = j.at("retries").get<int>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

json cipher_params_to_json(const CipherParams& c) {
  json j;
  j["n"] = c.n;
  j["source"] = c.source.probs();
  j["distortion"] = {{"d", c.spec.d.to_nested()}};
  j["D"] = c.spec.level;
  j["r_bits"] = c.key_rate_bits;
  if (std::isinf(c.alpha_bits)) j["alpha_bits"] = "+inf";
  else j["alpha_bits"] = c.alpha_bits;
  j["delta_bits"] = c.delta_bits;
  j["budget_slack_bits"] = c.budget_slack_bits;
  j["candidates"] = c.candidates;
  j["retries"] = c.retries;
  j["seed"] = c.seed;
  return j;
}

json scheme_to_json(const CipherScheme& s) {
  json types = json::array();
  for (std::size_t t = 0; t < s.types().size(); ++t) {
    types.push_back({{"counts", s.types()[t].counts}, {"feasible", s.feasible(t)}, {"codebook", s.codebook(t)}});
  }
  return {{"params", cipher_params_to_json(s.params())}, {"key_bits", s.key_bits()}, {"types", types}};
}

CipherScheme scheme_from_json(const json& j) {
  CipherParams c = parse_cipher_params(field(j, "params"));
  const json& types = field(j, "types");
  if (!types.is_array()) throw ParseError("types must be an array");
  std::vector<std::vector<std::uint64_t>> books;
  for (const auto& t : types) {
    const json& b = field(t, "codebook");
    if (!b.is_array()) throw ParseError("codebook must be an array");
    std::vector<std::uint64_t> book;
    for (const auto& w : b) {
      if (!w.is_number_unsigned() && !w.is_number_integer()) throw ParseError("codewords must be integers");
      book.push_back(w.get<std::uint64_t>());
    }
    books.push_back(std::move(book));
  }
  return CipherScheme::from_codebooks(c, std::move(books));
}

}  // namespace mleak::cli
