#include "cqed/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace cqed {

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string trajectory_csv(const ScenarioResult& r) {
  std::ostringstream os;
  os << "t";
  for (const auto& c : r.columns) os << "," << c;
  os << "\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    os << format_double(r.times[i]);
    for (const auto& c : r.columns) os << "," << format_double(r.series.at(c)[i]);
    os << "\n";
  }
  return os.str();
}

std::string spectrum_csv(const ModeSpectrum& s) {
  std::ostringstream os;
  os << "n,k_n,omega_n,c_n,l_n,edge_amplitude\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    os << i << "," << format_double(s.wavenumbers[i]) << "," << format_double(s.frequencies[i]) << ","
       << format_double(s.mode_caps[i]) << "," << format_double(s.mode_inds[i]) << ","
       << format_double(s.edge_amplitudes[i]) << "\n";
  return os.str();
}

nlohmann::json spectrum_json(const ModeSpectrum& s) {
  return {{"wavenumbers", s.wavenumbers},         {"mode_caps", s.mode_caps},
          {"mode_inds", s.mode_inds},             {"frequencies", s.frequencies},
          {"edge_amplitudes", s.edge_amplitudes}, {"zero_point", s.zero_point}};
}

nlohmann::json coupling_json(const CouplingTable& t) {
  return {{"m1", t.m1},
          {"m2", t.m2.data()},
          {"m3", t.m3.data()},
          {"n4", t.n4.data()},
          {"m4", t.m4.data()},
          {"m1_tilde", t.m1_tilde},
          {"m2_tilde", t.m2_tilde.data()},
          {"m3_tilde", t.m3_tilde.data()},
          {"n4_tilde", t.n4_tilde.data()},
          {"m4_tilde", t.m4_tilde.data()},
          {"layout", "row-major, first index slowest"}};
}

}  // namespace cqed
