#include <cstring>
#include <fstream>
#include <stdexcept>

#include "splab/dyadic/system.hpp"

namespace splab::dyadic {

namespace {
constexpr char kMagic[8] = {'S', 'P', 'L', 'G', 'R', 'I', 'D', '1'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

/// Little-endian binary writer/reader for grids and systems.
class GridIo {
 public:
  static void save(const std::string& path, const DyadicGrid& g,
                   const DyadicSystem* sys) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_grid: cannot open " + path);
    out.write(kMagic, 8);
    put(out, kVersion);
    put(out, static_cast<std::uint32_t>(g.dom_->dim()));
    put(out, g.cfg_.s);
    put(out, g.cfg_.delta_cal);
    put(out, static_cast<std::int32_t>(g.cfg_.levels));
    put(out, static_cast<std::uint64_t>(g.cfg_.dense_global));
    put(out, static_cast<std::uint64_t>(g.cfg_.dense_local));
    put(out, static_cast<std::int32_t>(g.cfg_.survey_per_level));
    put(out, static_cast<std::int32_t>(g.cfg_.max_global_net));
    put(out, g.cfg_.seed);
    put(out, static_cast<std::int32_t>(g.id_));
    put(out, static_cast<std::int32_t>(g.k_glob_));

    put(out, static_cast<std::uint32_t>(g.levels_.size()));
    for (const auto& lev : g.levels_) {
      put(out, static_cast<std::int32_t>(lev.k));
      put(out, lev.scale);
      put(out, static_cast<std::uint8_t>(lev.full ? 1 : 0));
      put(out, static_cast<std::uint64_t>(lev.net.size()));
      for (const auto& p : lev.net) put_point(out, p, g.dom_->dim());
      for (int v : lev.parent) put(out, static_cast<std::int32_t>(v));
      for (double v : lev.sigma) put(out, v);
      put(out, static_cast<std::uint8_t>(lev.surveyed.empty() ? 0 : 1));
      for (char v : lev.surveyed) put(out, static_cast<std::uint8_t>(v));
      put(out, static_cast<std::uint64_t>(lev.children.size()));
      for (const auto& kids : lev.children) {
        put(out, static_cast<std::uint32_t>(kids.size()));
        for (int v : kids) put(out, static_cast<std::int32_t>(v));
      }
    }

    put(out, static_cast<std::uint64_t>(g.dense_.size()));
    for (const auto& p : g.dense_.points) put_point(out, p, g.dom_->dim());
    for (double w : g.dense_.weights) put(out, w);
    put(out, static_cast<std::uint32_t>(g.dense_assign_.size()));
    for (const auto& a : g.dense_assign_)
      for (int v : a) put(out, static_cast<std::int32_t>(v));

    put(out, static_cast<std::uint8_t>(sys ? 1 : 0));
    if (sys) {
      put(out, sys->beta_);
      for (const auto& level_infos : sys->info_) {
        put(out, static_cast<std::uint64_t>(level_infos.size()));
        for (const auto& info : level_infos) {
          put_point(out, info.center, g.dom_->dim());
          put(out, info.volume);
          put(out, info.volume_se);
          put(out, info.sigma);
          put(out, static_cast<std::uint8_t>(info.flagged ? 1 : 0));
        }
      }
    }
    if (!out) throw std::runtime_error("save_grid: write failure " + path);
  }

  static std::unique_ptr<LoadedGrid> load(const std::string& path,
                                          std::shared_ptr<const Domain> dom) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_grid: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0)
      throw std::runtime_error("load_grid: bad magic in " + path);
    if (get<std::uint32_t>(in) != kVersion)
      throw std::runtime_error("load_grid: unsupported version");
    const int dim = static_cast<int>(get<std::uint32_t>(in));
    if (dim != dom->dim())
      throw std::runtime_error("load_grid: dimension mismatch");

    auto out = std::make_unique<LoadedGrid>();
    DyadicGrid& g = out->grid;
    g.dom_ = dom;
    g.cfg_.s = get<double>(in);
    g.cfg_.delta_cal = get<double>(in);
    g.cfg_.levels = get<std::int32_t>(in);
    g.cfg_.dense_global = get<std::uint64_t>(in);
    g.cfg_.dense_local = get<std::uint64_t>(in);
    g.cfg_.survey_per_level = get<std::int32_t>(in);
    g.cfg_.max_global_net = get<std::int32_t>(in);
    g.cfg_.seed = get<std::uint64_t>(in);
    g.id_ = get<std::int32_t>(in);
    g.k_glob_ = get<std::int32_t>(in);

    const auto n_levels = get<std::uint32_t>(in);
    g.levels_.resize(n_levels);
    for (auto& lev : g.levels_) {
      lev.k = get<std::int32_t>(in);
      lev.scale = get<double>(in);
      lev.full = get<std::uint8_t>(in) != 0;
      const auto n = get<std::uint64_t>(in);
      lev.net.resize(n);
      for (auto& p : lev.net) p = get_point(in, dim);
      lev.parent.resize(n);
      for (auto& v : lev.parent) v = get<std::int32_t>(in);
      lev.sigma.resize(n);
      for (auto& v : lev.sigma) v = get<double>(in);
      if (get<std::uint8_t>(in) != 0) {
        lev.surveyed.resize(n);
        for (auto& v : lev.surveyed) v = static_cast<char>(get<std::uint8_t>(in));
      }
      const auto nc = get<std::uint64_t>(in);
      lev.children.resize(nc);
      for (auto& kids : lev.children) {
        kids.resize(get<std::uint32_t>(in));
        for (auto& v : kids) v = get<std::int32_t>(in);
      }
    }

    const auto nd = get<std::uint64_t>(in);
    g.dense_.points.resize(nd);
    for (auto& p : g.dense_.points) p = get_point(in, dim);
    g.dense_.weights.resize(nd);
    for (auto& w : g.dense_.weights) w = get<double>(in);
    const auto na = get<std::uint32_t>(in);
    g.dense_assign_.assign(na, std::vector<int>(nd));
    for (auto& a : g.dense_assign_)
      for (auto& v : a) v = get<std::int32_t>(in);

    if (get<std::uint8_t>(in) != 0) {
      DyadicSystem sys;
      sys.grid_ = &out->grid;
      sys.beta_ = get<double>(in);
      sys.info_.resize(n_levels);
      for (auto& level_infos : sys.info_) {
        level_infos.resize(get<std::uint64_t>(in));
        for (auto& info : level_infos) {
          info.center = get_point(in, dim);
          info.volume = get<double>(in);
          info.volume_se = get<double>(in);
          info.sigma = get<double>(in);
          info.flagged = get<std::uint8_t>(in) != 0;
        }
      }
      out->system = std::move(sys);
    }
    if (!in) throw std::runtime_error("load_grid: truncated file " + path);
    return out;
  }

 private:
  template <typename T>
  static void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  template <typename T>
  static T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
  }
  static void put_point(std::ofstream& out, const Cn& p, int dim) {
    for (int j = 0; j < dim; ++j) {
      put(out, p[j].real());
      put(out, p[j].imag());
    }
  }
  static Cn get_point(std::ifstream& in, int dim) {
    Cn p(dim);
    for (int j = 0; j < dim; ++j) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      p[j] = cxd{re, im};
    }
    return p;
  }
};

void save_grid(const std::string& path, const DyadicGrid& grid,
               const DyadicSystem* sys) {
  GridIo::save(path, grid, sys);
}

std::unique_ptr<LoadedGrid> load_grid(const std::string& path,
                                      std::shared_ptr<const Domain> dom) {
  return GridIo::load(path, dom);
}

}  // namespace splab::dyadic
