#include "subtag/params_io.hpp"

#include <fstream>
#include <sstream>

#include "subtag/error.hpp"

namespace subtag {

namespace {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tok;
};

std::vector<Line> lines_of(std::string_view text) {
  std::vector<Line> out;
  std::istringstream is{std::string(text)};
  std::string raw;
  std::size_t no = 0;
  while (std::getline(is, raw)) {
    ++no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    Line line{no, {}};
    for (std::string t; ls >> t;) line.tok.push_back(t);
    if (!line.tok.empty()) out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] void fail(const Line& line, const std::string& what) {
  raise(Errc::ParseError, "params line " + std::to_string(line.number) + ": " + what);
}

std::uint64_t number(const Line& line, std::size_t i) {
  if (i >= line.tok.size()) fail(line, "missing field");
  const auto& s = line.tok[i];
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) fail(line, "expected a number, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    fail(line, "number out of range: '" + s + "'");
  }
}

std::vector<std::uint32_t> numbers_from(const Line& line, std::size_t start) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = start; i < line.tok.size(); ++i) out.push_back(static_cast<std::uint32_t>(number(line, i)));
  return out;
}

const Line& expect(const std::vector<Line>& lines, std::size_t& at, const char* directive) {
  if (at >= lines.size()) raise(Errc::ParseError, std::string("params file ends before '") + directive + "'");
  const Line& line = lines[at++];
  if (line.tok[0] != directive) fail(line, std::string("expected '") + directive + "', got '" + line.tok[0] + "'");
  return line;
}

std::vector<Elem> elems_from(const Field& f, const Line& line, std::size_t start, std::size_t count) {
  if (line.tok.size() != start + count) {
    fail(line, "expected " + std::to_string(count) + " entries, got " + std::to_string(line.tok.size() - start));
  }
  std::vector<Elem> out;
  for (std::size_t i = start; i < line.tok.size(); ++i) out.push_back(f.parse(line.tok[i]));
  return out;
}

}  // namespace

std::optional<ec::AgCodeSpec> ParamsBundle::ag_spec() const {
  if (!curve) return std::nullopt;
  return ec::AgCodeSpec{ec::EllipticCurve(pp.ext(), curve->a, curve->b), curve->points, curve->degree};
}

std::string write_params(const ParamsBundle& bundle) {
  const auto& pp = bundle.pp;
  std::ostringstream os;
  os << "subtag-params 1\n";
  os << "# " << pp.base().describe() << ", " << pp.ext().describe() << "\n";
  os << "base " << pp.base().characteristic() << ' ' << pp.base().degree();
  for (auto c : pp.base().modulus()) os << ' ' << c;
  os << "\nextension " << pp.l();
  for (auto c : pp.ext().modulus()) os << ' ' << c;
  os << "\nscheme " << pp.n() << ' ' << pp.M() << "\n";
  os << "code " << pp.V() << ' ' << pp.kdim() << "\n";
  const Matrix& g = pp.code().generator();
  for (std::size_t r = 0; r < g.rows(); ++r) {
    os << "row";
    for (std::size_t c = 0; c < g.cols(); ++c) os << ' ' << pp.ext().format(g(r, c));
    os << "\n";
  }
  if (bundle.rs_points) {
    os << "rs";
    for (auto a : *bundle.rs_points) os << ' ' << pp.ext().format(a);
    os << "\n";
  }
  if (bundle.curve) {
    const auto& cv = *bundle.curve;
    os << "curve " << pp.ext().format(cv.a) << ' ' << pp.ext().format(cv.b) << ' ' << cv.degree << "\n";
    for (const auto& p : cv.points) os << "point " << pp.ext().format(p.x) << ' ' << pp.ext().format(p.y) << "\n";
  }
  return os.str();
}

ParamsBundle read_params(std::string_view text) {
  const auto lines = lines_of(text);
  std::size_t at = 0;
  const auto& magic = expect(lines, at, "subtag-params");
  if (number(magic, 1) != 1) fail(magic, "unsupported format version");

  const auto& bl = expect(lines, at, "base");
  const auto p = static_cast<std::uint32_t>(number(bl, 1));
  const auto m = static_cast<unsigned>(number(bl, 2));
  auto base = bl.tok.size() > 3 ? Field::base(p, m, numbers_from(bl, 3)) : Field::base(p, m);

  const auto& el = expect(lines, at, "extension");
  const auto l = static_cast<unsigned>(number(el, 1));
  auto ext = el.tok.size() > 2 ? Field::extension(base, l, numbers_from(el, 2)) : Field::extension(base, l);

  const auto& sl = expect(lines, at, "scheme");
  const auto n = number(sl, 1);
  const std::optional<std::size_t> M = sl.tok.size() > 2 ? std::optional<std::size_t>(number(sl, 2)) : std::nullopt;

  const auto& cl = expect(lines, at, "code");
  const auto V = number(cl, 1);
  const auto k = number(cl, 2);
  std::vector<std::vector<Elem>> rows;
  for (std::size_t r = 0; r < k; ++r) rows.push_back(elems_from(*ext, expect(lines, at, "row"), 1, V));
  LinearCode code(Matrix::from_rows(*ext, V, rows));

  std::optional<std::vector<Elem>> rs_points;
  std::optional<CurveBlock> curve;
  while (at < lines.size()) {
    const Line& line = lines[at++];
    if (line.tok[0] == "rs") {
      rs_points = elems_from(*ext, line, 1, V);
      const auto rs = rs_code(*ext, *rs_points, k);
      if (!(rs.generator() == code.generator())) fail(line, "rs points do not reproduce the generator rows");
    } else if (line.tok[0] == "curve") {
      if (line.tok.size() != 4) fail(line, "expected 'curve <a> <b> <deg>'");
      CurveBlock cb{ext->parse(line.tok[1]), ext->parse(line.tok[2]), static_cast<unsigned>(number(line, 3)), {}};
      for (std::size_t i = 0; i < V; ++i) {
        const auto xy = elems_from(*ext, expect(lines, at, "point"), 1, 2);
        cb.points.push_back(ec::Point::affine(xy[0], xy[1]));
      }
      curve = std::move(cb);
    } else {
      fail(line, "unknown directive '" + line.tok[0] + "'");
    }
  }
  ParamsBundle bundle{PublicParams(base, ext, n, M, std::move(code)), std::move(rs_points), std::move(curve)};
  if (const auto spec = bundle.ag_spec()) {
    const auto residue = ec::residue_code(*spec);
    const auto combined = vstack(residue.generator(), bundle.pp.code().generator());
    if (rank(combined) != residue.dimension() || residue.dimension() != bundle.pp.kdim()) {
      raise(Errc::InvalidParams, "code rows do not span the residue code of the curve block");
    }
  }
  return bundle;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::ParseError, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::InvalidParams, "cannot write '" + path + "'");
  out << text;
}

ParamsBundle load_params_file(const std::string& path) { return read_params(read_text_file(path)); }

void save_params_file(const std::string& path, const ParamsBundle& bundle) {
  write_text_file(path, write_params(bundle));
}

}  // namespace subtag
