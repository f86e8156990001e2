#include "rankagg/io.hpp"

#include <cerrno>
#include <cstdlib>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

namespace rankagg {
namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

long long toInteger(const Token& t, std::size_t lineNo) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) {
    throw ParseError(lineNo, t.column, "expected an integer, got '" + std::string(t.text) + "'");
  }
  return v;
}

double toDouble(const Token& t, std::size_t lineNo) {
  // from_chars for double is missing from older libstdc++; strtod is fine here.
  const std::string s(t.text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    throw ParseError(lineNo, t.column, "expected a number, got '" + s + "'");
  }
  return v;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : InvalidInput("line " + std::to_string(line) + ", column " + std::to_string(column) +
                   ": " + what),
      line_(line),
      column_(column) {}

Permutation parsePermutation(std::string_view line) {
  std::vector<Element> v;
  for (const auto& t : tokenize(line)) {
    v.push_back(static_cast<Element>(toInteger(t, 1)));
  }
  return Permutation(std::move(v));
}

Instance parseInstance(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }

  std::size_t lineNo = 0;
  auto nextNonEmpty = [&]() -> std::vector<Token> {
    while (lineNo < lines.size()) {
      auto toks = tokenize(lines[lineNo++]);
      if (!toks.empty()) return toks;
    }
    return {};
  };

  auto header = nextNonEmpty();
  if (header.size() != 2) {
    throw ParseError(lineNo == 0 ? 1 : lineNo, 1, "header must be 'n m'");
  }
  const long long n = toInteger(header[0], lineNo);
  const long long m = toInteger(header[1], lineNo);
  if (n < 1) throw ParseError(lineNo, header[0].column, "n must be >= 1");
  if (m < 1) throw ParseError(lineNo, header[1].column, "m must be >= 1");

  std::vector<Permutation> perms;
  perms.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    auto toks = nextNonEmpty();
    if (toks.empty()) {
      throw ParseError(lineNo + 1, 1, "expected " + std::to_string(m) + " permutations, found " +
                                          std::to_string(k));
    }
    if (toks.size() != static_cast<std::size_t>(n)) {
      throw ParseError(lineNo, toks.back().column,
                       "expected " + std::to_string(n) + " elements, found " +
                           std::to_string(toks.size()));
    }
    std::vector<Element> v;
    v.reserve(toks.size());
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (const auto& t : toks) {
      const auto e = toInteger(t, lineNo);
      if (e < 1 || e > n) {
        throw ParseError(lineNo, t.column, "element " + std::to_string(e) + " outside 1.." +
                                               std::to_string(n));
      }
      if (seen[static_cast<std::size_t>(e)]) {
        throw ParseError(lineNo, t.column, "element " + std::to_string(e) + " repeated");
      }
      seen[static_cast<std::size_t>(e)] = true;
      v.push_back(static_cast<Element>(e));
    }
    perms.emplace_back(std::move(v));
  }

  std::optional<WeightVector> weights;
  auto tail = nextNonEmpty();
  if (!tail.empty()) {
    if (tail[0].text != "w") {
      throw ParseError(lineNo, tail[0].column, "expected 'w' weight line or end of input");
    }
    if (tail.size() != static_cast<std::size_t>(n) + 1) {
      throw ParseError(lineNo, tail.back().column,
                       "expected " + std::to_string(n) + " weights");
    }
    std::vector<double> w;
    for (std::size_t i = 1; i < tail.size(); ++i) {
      const double x = toDouble(tail[i], lineNo);
      if (!(x >= 0.0)) throw ParseError(lineNo, tail[i].column, "weights must be nonnegative");
      w.push_back(x);
    }
    weights.emplace(std::move(w));
    auto extra = nextNonEmpty();
    if (!extra.empty()) throw ParseError(lineNo, extra[0].column, "unexpected trailing content");
  }
  return Instance(std::move(perms), std::move(weights));
}

Instance readInstanceFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open instance file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parseInstance(buf.str());
}

std::string formatInstance(const Instance& instance) {
  std::ostringstream os;
  os << instance.n << ' ' << instance.m() << '\n';
  for (const auto& p : instance.perms) os << p.toString() << '\n';
  if (instance.weights) {
    os << 'w';
    os.precision(17);
    for (double x : instance.weights->values()) os << ' ' << x;
    os << '\n';
  }
  return os.str();
}

Permutation randomPermutation(std::size_t n, Rng& rng) {
  std::vector<Element> v(n);
  std::iota(v.begin(), v.end(), 1);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(v[i - 1], v[uniformBelow(rng, i)]);
  }
  return Permutation(std::move(v));
}

Permutation randomMove(const Permutation& p, Rng& rng) {
  const auto n = p.size();
  if (n < 2) return p;
  std::vector<Element> v(p.oneLine().begin(), p.oneLine().end());
  const auto from = uniformBelow(rng, n);
  auto to = uniformBelow(rng, n - 1);
  if (to >= from) ++to;
  const Element e = v[from];
  v.erase(v.begin() + static_cast<std::ptrdiff_t>(from));
  v.insert(v.begin() + static_cast<std::ptrdiff_t>(to), e);
  return Permutation(std::move(v));
}

Instance generateUniform(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw InvalidInput("gen requires n >= 1 and m >= 1");
  std::vector<Permutation> ps;
  for (std::size_t k = 0; k < m; ++k) {
    auto rng = makeRng(seed, "gen.uniform", k);
    ps.push_back(randomPermutation(n, rng));
  }
  return Instance(std::move(ps));
}

PlantedInstance generatePlanted(std::size_t n, std::size_t m, std::size_t moves,
                                std::uint64_t seed) {
  if (n < 1 || m < 1) throw InvalidInput("gen requires n >= 1 and m >= 1");
  auto centerRng = makeRng(seed, "gen.center");
  auto center = randomPermutation(n, centerRng);
  std::vector<Permutation> ps;
  for (std::size_t k = 0; k < m; ++k) {
    auto rng = makeRng(seed, "gen.planted", k);
    auto p = center;
    for (std::size_t t = 0; t < moves; ++t) p = randomMove(p, rng);
    ps.push_back(std::move(p));
  }
  return {Instance(std::move(ps)), std::move(center)};
}

}  // namespace rankagg
