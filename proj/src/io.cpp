#include "cohflow/io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cohflow/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary formats are little-endian; big-endian hosts unsupported");

namespace cohflow {

namespace {

constexpr char kEnsembleMagic[8] = {'C', 'F', 'L', 'O', 'W', 'E', 'N', 'S'};
constexpr char kClusteringMagic[8] = {'C', 'F', 'L', 'O', 'W', 'C', 'L', 'U'};
constexpr std::uint32_t kFormatVersion = 1;

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return in;
}

template <typename T>
void put(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::filesystem::path& path) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T)))
    throw IoError("truncated file: " + path.string());
  return value;
}

// Shortest representation that round-trips a double exactly.
std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lg", &back);
  if (back == v) {
    char shorter[32];
    for (int prec = 1; prec < 17; ++prec) {
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
      std::sscanf(shorter, "%lg", &back);
      if (back == v) return shorter;
    }
  }
  return buf;
}

}  // namespace

void write_ensemble(const TrajectoryEnsemble& e, const std::filesystem::path& path) {
  auto out = open_out(path, true);
  out.write(kEnsembleMagic, sizeof(kEnsembleMagic));
  put(out, kFormatVersion);
  put(out, static_cast<std::uint32_t>(TrajectoryEnsemble::dim));
  put(out, static_cast<std::uint64_t>(e.time.n));
  put(out, static_cast<std::uint64_t>(e.size()));
  for (double v : {e.grid.xmin, e.grid.xmax, e.grid.ymin, e.grid.ymax,
                   e.grid.dx, e.grid.dy, e.time.t0, e.time.dt})
    put(out, v);
  out.write(reinterpret_cast<const char*>(e.data.data()),
            static_cast<std::streamsize>(e.data.size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path.string());
}

TrajectoryEnsemble read_ensemble(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  char magic[8];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kEnsembleMagic, sizeof(magic)) != 0)
    throw IoError("not an ensemble file: " + path.string());
  if (get<std::uint32_t>(in, path) != kFormatVersion)
    throw IoError("unsupported ensemble version: " + path.string());
  if (get<std::uint32_t>(in, path) != TrajectoryEnsemble::dim)
    throw IoError("unsupported dimension: " + path.string());
  TrajectoryEnsemble e;
  e.time.n = get<std::uint64_t>(in, path);
  std::uint64_t m = get<std::uint64_t>(in, path);
  e.grid.xmin = get<double>(in, path);
  e.grid.xmax = get<double>(in, path);
  e.grid.ymin = get<double>(in, path);
  e.grid.ymax = get<double>(in, path);
  e.grid.dx = get<double>(in, path);
  e.grid.dy = get<double>(in, path);
  e.time.t0 = get<double>(in, path);
  e.time.dt = get<double>(in, path);
  e.grid.validate();
  if (e.size() != m) throw IoError("ensemble M inconsistent with grid: " + path.string());
  e.data.resize(m * e.feature_length());
  if (!in.read(reinterpret_cast<char*>(e.data.data()),
               static_cast<std::streamsize>(e.data.size() * sizeof(double))))
    throw IoError("truncated ensemble payload: " + path.string());
  return e;
}

void write_ensemble_csv(const TrajectoryEnsemble& e,
                        const std::filesystem::path& path) {
  auto out = open_out(path, false);
  out << "trajectory";
  for (std::size_t i = 0; i <= e.time.n; ++i)
    out << ",x" << i << ",y" << i;
  out << "\n";
  for (std::size_t j = 0; j < e.size(); ++j) {
    out << j;
    for (double v : e.feature(j)) out << ',' << format_double(v);
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_clustering(const Clustering& c, const std::filesystem::path& path) {
  auto out = open_out(path, true);
  out.write(kClusteringMagic, sizeof(kClusteringMagic));
  put(out, kFormatVersion);
  put(out, std::uint32_t{0});
  put(out, static_cast<std::uint64_t>(c.k));
  put(out, static_cast<std::uint64_t>(c.labels.size()));
  put(out, static_cast<std::uint64_t>(c.cols));
  put(out, c.seed);
  put(out, c.wcss);
  out.write(reinterpret_cast<const char*>(c.labels.data()),
            static_cast<std::streamsize>(c.labels.size() * sizeof(std::uint32_t)));
  out.write(reinterpret_cast<const char*>(c.centroids.data()),
            static_cast<std::streamsize>(c.centroids.size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path.string());
}

Clustering read_clustering(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  char magic[8];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kClusteringMagic, sizeof(magic)) != 0)
    throw IoError("not a clustering file: " + path.string());
  if (get<std::uint32_t>(in, path) != kFormatVersion)
    throw IoError("unsupported clustering version: " + path.string());
  get<std::uint32_t>(in, path);
  Clustering c;
  c.k = get<std::uint64_t>(in, path);
  std::uint64_t m = get<std::uint64_t>(in, path);
  c.cols = get<std::uint64_t>(in, path);
  c.seed = get<std::uint64_t>(in, path);
  c.wcss = get<double>(in, path);
  c.labels.resize(m);
  if (!in.read(reinterpret_cast<char*>(c.labels.data()),
               static_cast<std::streamsize>(m * sizeof(std::uint32_t))))
    throw IoError("truncated labels: " + path.string());
  c.centroids.resize(c.k * c.cols);
  if (!in.read(reinterpret_cast<char*>(c.centroids.data()),
               static_cast<std::streamsize>(c.centroids.size() * sizeof(double))))
    throw IoError("truncated centroids: " + path.string());
  return c;
}

void export_field_csv(const ScalarField& f, const std::filesystem::path& path) {
  auto out = open_out(path, false);
  out << "nx,ny,xmin,xmax,ymin,ymax,quantity,t_begin,t_end\n";
  out << f.grid.nx() << ',' << f.grid.ny() << ','
      << format_double(f.grid.xmin) << ',' << format_double(f.grid.xmax) << ','
      << format_double(f.grid.ymin) << ',' << format_double(f.grid.ymax) << ','
      << f.quantity << ',' << format_double(f.t_begin) << ','
      << format_double(f.t_end) << "\n";
  const std::size_t cols = f.grid.nx() + 1;
  const std::size_t rows = f.grid.ny() + 1;
  for (std::size_t iy = 0; iy < rows; ++iy) {
    for (std::size_t ix = 0; ix < cols; ++ix) {
      if (ix) out << ',';
      double v = f.values[iy * cols + ix];
      if (!ScalarField::is_sentinel(v)) out << format_double(v);
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

ScalarField import_field_csv(const std::filesystem::path& path) {
  auto in = open_in(path, false);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty field csv: " + path.string());
  if (!std::getline(in, line)) throw IoError("missing field header: " + path.string());
  std::istringstream header(line);
  std::string cell;
  auto next = [&]() {
    if (!std::getline(header, cell, ',')) throw IoError("bad field header: " + path.string());
    return cell;
  };
  ScalarField f;
  std::size_t nx = std::stoul(next());
  std::size_t ny = std::stoul(next());
  f.grid.xmin = std::stod(next());
  f.grid.xmax = std::stod(next());
  f.grid.ymin = std::stod(next());
  f.grid.ymax = std::stod(next());
  f.quantity = next();
  f.t_begin = std::stod(next());
  f.t_end = std::stod(next());
  f.grid.dx = (f.grid.xmax - f.grid.xmin) / static_cast<double>(nx);
  f.grid.dy = (f.grid.ymax - f.grid.ymin) / static_cast<double>(ny);
  f.values.reserve((nx + 1) * (ny + 1));
  for (std::size_t iy = 0; iy <= ny; ++iy) {
    if (!std::getline(in, line)) throw IoError("truncated field csv: " + path.string());
    std::istringstream row(line);
    for (std::size_t ix = 0; ix <= nx; ++ix) {
      if (!std::getline(row, cell, ',') && ix + 1 < nx + 1)
        throw IoError("short row in field csv: " + path.string());
      f.values.push_back(cell.empty() ? ScalarField::sentinel() : std::stod(cell));
      cell.clear();
    }
  }
  return f;
}

void export_field_pgm(const ScalarField& f, const std::filesystem::path& path,
                      bool clamp_negative) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : f.values) {
    if (ScalarField::is_sentinel(v)) continue;
    if (clamp_negative && v < 0.0) v = 0.0;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo <= hi)) throw IoError("pgm export: no finite values to scale");
  const double span = hi - lo;

  auto out = open_out(path, true);
  const std::size_t cols = f.grid.nx() + 1;
  const std::size_t rows = f.grid.ny() + 1;
  out << "P5\n" << cols << ' ' << rows << "\n65535\n";
  // Top image row = ymax so the picture is y-up.
  for (std::size_t iy = rows; iy-- > 0;) {
    for (std::size_t ix = 0; ix < cols; ++ix) {
      double v = f.values[iy * cols + ix];
      std::uint16_t pixel = 0;
      if (!ScalarField::is_sentinel(v)) {
        if (clamp_negative && v < 0.0) v = 0.0;
        double scaled = span > 0.0 ? (v - lo) / span : 0.0;
        pixel = static_cast<std::uint16_t>(std::lround(scaled * 65535.0));
      }
      // PGM multi-byte samples are most-significant-byte first.
      char bytes[2] = {static_cast<char>(pixel >> 8), static_cast<char>(pixel & 0xff)};
      out.write(bytes, 2);
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_wcss_trace_csv(const std::vector<StageRecord>& trace,
                          const std::filesystem::path& path) {
  auto out = open_out(path, false);
  out << "stage,pass,wcss\n";
  for (const StageRecord& stage : trace) {
    std::size_t pass = 0;
    for (double w : stage.wcss_history)
      out << stage.stage << ',' << pass++ << ',' << format_double(w) << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace cohflow
