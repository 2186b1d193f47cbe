#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sdcadj/errors.hpp"
#include "sdcadj/problems.hpp"

namespace sdcadj {
namespace {

class TokenStream {
 public:
  explicit TokenStream(const std::string& text) {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream words(line);
      std::string w;
      while (words >> w) tokens_.push_back(w);
    }
  }

  bool done() const { return pos_ >= tokens_.size(); }
  std::string next_word() {
    if (done()) throw InvalidArgument("config: unexpected end of file");
    return tokens_[pos_++];
  }
  double next_number(const std::string& key) {
    const std::string w = next_word();
    double value = 0.0;
    const auto* end = w.data() + w.size();
    auto [ptr, ec] = std::from_chars(w.data(), end, value);
    if (ec != std::errc() || ptr != end) {
      throw InvalidArgument("config: expected a number for '" + key + "', got '" + w + "'");
    }
    return value;
  }
  Vector next_vector(const std::string& key, int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = next_number(key);
    return v;
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Benchmark parse_linear_config(const std::string& text) {
  TokenStream in(text);
  std::optional<int> dim;
  std::optional<Matrix> B;
  std::optional<Vector> y0, psi, psi_T;
  std::optional<double> T;
  Forcing forcing;
  std::string name = "custom";

  auto need_dim = [&](const std::string& key) {
    if (!dim) throw InvalidArgument("config: '" + key + "' before 'dimension'");
    return *dim;
  };

  while (!in.done()) {
    const std::string key = in.next_word();
    if (key == "dimension") {
      const double v = in.next_number(key);
      if (v < 1 || v != static_cast<int>(v)) throw InvalidArgument("config: bad dimension");
      dim = static_cast<int>(v);
    } else if (key == "name") {
      name = in.next_word();
    } else if (key == "matrix") {
      const int d = need_dim(key);
      Matrix m(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) m(i, j) = in.next_number(key);
      }
      B = std::move(m);
    } else if (key == "forcing") {
      const int d = need_dim(key);
      const std::string kind = in.next_word();
      if (kind == "none") {
        forcing = Forcing{};
      } else if (kind == "cos") {
        forcing.kind = Forcing::Kind::Cos;
        forcing.omega = in.next_number(key);
        forcing.phase = in.next_number(key);
        forcing.amplitude = in.next_vector(key, d);
      } else if (kind == "sincos") {
        forcing.kind = Forcing::Kind::SinCos;
        forcing.omega = in.next_number(key);
        forcing.amplitude = in.next_vector(key, d);
        forcing.cos_amplitude = in.next_vector(key, d);
      } else {
        throw InvalidArgument("config: unknown forcing '" + kind + "'");
      }
    } else if (key == "y0") {
      y0 = in.next_vector(key, need_dim(key));
    } else if (key == "T") {
      T = in.next_number(key);
    } else if (key == "psi") {
      psi = in.next_vector(key, need_dim(key));
    } else if (key == "psi_T") {
      psi_T = in.next_vector(key, need_dim(key));
    } else {
      throw InvalidArgument("config: unknown key '" + key + "'");
    }
  }

  if (!dim || !B || !y0 || !T) {
    throw InvalidArgument("config: 'dimension', 'matrix', 'y0' and 'T' are required");
  }
  if (!psi && !psi_T) throw InvalidArgument("config: at least one of 'psi', 'psi_T' is required");
  return linear_problem(std::move(name), std::move(*B), std::move(forcing), std::move(*y0), *T,
                        psi.value_or(Vector::Zero(*dim)), psi_T.value_or(Vector::Zero(*dim)));
}

Benchmark load_linear_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InvalidArgument("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_linear_config(buffer.str());
}

}  // namespace sdcadj
