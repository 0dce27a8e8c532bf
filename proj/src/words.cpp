#include "schottky/schottky.hpp"

namespace schottky {

bool is_reduced(const Word& w) {
  for (std::size_t k = 1; k < w.size(); ++k)
    if (w[k].i == w[k - 1].i && w[k].sigma == -w[k - 1].sigma) return false;
  return true;
}

bool is_cyclically_reduced(const Word& w) {
  if (!is_reduced(w)) return false;
  if (w.size() < 2) return true;
  return !(w.front().i == w.back().i && w.front().sigma == -w.back().sigma);
}

std::string word_to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string s;
  for (const auto& l : w) {
    if (!s.empty()) s += ' ';
    s += 'g' + std::to_string(l.i + 1);
    if (l.sigma < 0) s += "^-1";
  }
  return s;
}

std::vector<Word> enumerate_words(int n, int max_len, WordMode mode) {
  if (n < 1 || max_len < 0) throw GeometryError("enumerate_words needs n >= 1 and max_len >= 0");
  std::vector<Letter> alphabet;
  for (int i = 0; i < n; ++i) {
    alphabet.push_back({i, 1});
    alphabet.push_back({i, -1});
  }
  std::vector<Word> out{Word{}};
  std::vector<Word> layer{Word{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : layer)
      for (const Letter& l : alphabet) {
        if (!w.empty() && w.back().i == l.i && w.back().sigma == -l.sigma) continue;
        Word v = w;
        v.push_back(l);
        next.push_back(std::move(v));
      }
    layer = std::move(next);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  if (mode == WordMode::CyclicallyReduced) std::erase_if(out, [](const Word& w) {
    return !is_cyclically_reduced(w);
  });
  return out;
}

Mat word_matrix(const SchottkyGroup& group, const Word& w) {
  const int n = group.ctx.dim();
  Mat m = Mat::Identity(n, n);
  for (const auto& l : w) {
    const auto& g = group.generators.at(l.i);
    m = compose(group.ctx, m, l.sigma > 0 ? g.matrix() : g.inverse());
  }
  return m;
}

}  // namespace schottky
