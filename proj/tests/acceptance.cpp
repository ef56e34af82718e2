// Acceptance gate: ten end-to-end criteria, one PASS/FAIL line each.
// Exit code is the number of failing criteria.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "grassfactor/decompose.hpp"
#include "grassfactor/grassmann.hpp"
#include "grassfactor/json_io.hpp"
#include "grassfactor/phi.hpp"
#include "grassfactor/random.hpp"
#include "grassfactor/symplectic.hpp"

using namespace grassfactor;
namespace sp = grassfactor::symplectic;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;
int failures = 0;

void report(int idx, const char* label, bool ok, const std::string& detail) {
  std::printf("%s: criterion %d (%s)%s%s\n", ok ? "PASS" : "FAIL", idx, label,
              detail.empty() ? "" : " - ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool factor_point_ok(const grassmann::GrassPoint& p, double tol) {
  auto r = grassmann::gr_validate(p, tol);
  return r.ok;
}

// --- criterion 1: two-factor split of SO(n), n up to 200 ---------------------
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  int bad = 0;
  for (int n = 2; n <= 200; ++n)
    for (int rep = 0; rep < 10; ++rep) {
      RealMatrix z = haar_special_orthogonal(n, rng);
      decompose::Factorization f;
      try {
        f = decompose::decompose_so(z);
      } catch (const std::exception&) {
        ++bad;
        continue;
      }
      bool ok = f.factors.size() == 2 && f.residual <= 1e-9 * n;
      for (const auto& p : f.factors) {
        auto r = grassmann::gr_validate(p, 1e-10);
        ok = ok && r.involution_residual <= 1e-10 * n && r.hermitian_residual <= 1e-10 * n &&
             r.trace_residual <= 1e-10 * n && p.k == n / 2;
      }
      if (!ok) ++bad;
    }
  double dt = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d failures, %.1f s (budget 60 s)", bad, dt);
  report(1, "orthogonal two-factor split", bad == 0 && dt <= 60.0, buf);
}

// --- criterion 2: four-factor split of SU(n) and the det -1 variant ----------
void criterion2() {
  Rng rng(202);
  int bad = 0;
  for (int n = 2; n <= 100; ++n)
    for (int rep = 0; rep < 10; ++rep) {
      ComplexMatrix z = haar_special_unitary(n, rng);
      bool anti = rep % 2 == 1;
      if (anti) z.col(0) *= -1.0;
      decompose::Factorization f;
      try {
        f = anti ? decompose::decompose_su_minus(z) : decompose::decompose_su(z);
      } catch (const std::exception&) {
        ++bad;
        continue;
      }
      bool ok = f.factors.size() == 4 && f.residual <= 1e-9 * n;
      for (const auto& p : f.factors) ok = ok && factor_point_ok(p, 1e-9);
      if (!ok) ++bad;
    }
  report(2, "unitary four-factor split", bad == 0, std::to_string(bad) + " failures");
}

// --- criterion 3: dimension formula vs numerical tangent rank ----------------
// Tangent space of the product map at (X, Y): d(X, Y) = [O, X] Y + X [O', Y]
// over skew / skew-Hermitian directions O, O'; its rank must equal phi_dim.
long long tangent_rank(Field field, const grassmann::GrassPoint& x,
                       const grassmann::GrassPoint& y) {
  const int n = x.n;
  std::vector<ComplexMatrix> dirs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ComplexMatrix o = ComplexMatrix::Zero(n, n);
      o(i, j) = 1;
      o(j, i) = -1;
      dirs.push_back(o);
      if (field == Field::Complex) {
        ComplexMatrix h = ComplexMatrix::Zero(n, n);
        h(i, j) = Complex(0, 1);
        h(j, i) = Complex(0, 1);
        dirs.push_back(h);
      }
    }
  if (field == Field::Complex)
    for (int i = 0; i < n; ++i) {
      ComplexMatrix h = ComplexMatrix::Zero(n, n);
      h(i, i) = Complex(0, 1);
      dirs.push_back(h);
    }
  const int cols = 2 * int(dirs.size());
  const int rows = 2 * n * n;  // real and imaginary parts stacked
  RealMatrix jac(rows, cols);
  int c = 0;
  auto put = [&](const ComplexMatrix& t) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        jac(j * n + i, c) = t(i, j).real();
        jac(n * n + j * n + i, c) = t(i, j).imag();
      }
    ++c;
  };
  for (const auto& o : dirs) put((o * x.m - x.m * o) * y.m);
  for (const auto& o : dirs) put(x.m * (o * y.m - y.m * o));
  Eigen::JacobiSVD<RealMatrix> svd(jac);
  long long rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-6) ++rank;
  return rank;
}

void criterion3() {
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(303);
  int bad = 0;
  std::string first;
  for (Field field : {Field::Real, Field::Complex})
    for (int n = 2; n <= 8; ++n)
      for (int k = 1; k < n; ++k)
        for (int kp = 1; kp <= k && k + kp <= n; ++kp) {
          long long expect = phi::phi_dim(field, k, kp, n);
          for (int rep = 0; rep < 20; ++rep) {
            auto x = grassmann::gr_sample(field, k, n, rng.next());
            auto y = grassmann::gr_sample(field, kp, n, rng.next());
            long long got = tangent_rank(field, x, y);
            if (got != expect) {
              ++bad;
              if (first.empty())
                first = "(" + std::string(field_name(field)) + "," + std::to_string(k) + "," +
                        std::to_string(kp) + ",n=" + std::to_string(n) + ") rank " +
                        std::to_string(got) + " vs " + std::to_string(expect);
            }
          }
        }
  double dt = seconds_since(t0);
  char buf[192];
  std::snprintf(buf, sizeof(buf), "%d mismatches%s%s, %.1f s (budget 300 s)", bad,
                first.empty() ? "" : " e.g. ", first.c_str(), dt);
  report(3, "product dimension formula", bad == 0 && dt <= 300.0, buf);
}

// --- criterion 4: membership oracle equivalence ------------------------------
ComplexMatrix profile_matrix(Field field, int n, int t, int a, int b, Rng& rng) {
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  int pos = 0;
  for (int i = 0; i < t; ++i) {
    double theta = 0.35 + 2.2 * i / (2.0 * t + 1);
    if (field == Field::Real) {
      d(pos, pos) = std::cos(theta);
      d(pos, pos + 1) = -std::sin(theta);
      d(pos + 1, pos) = std::sin(theta);
      d(pos + 1, pos + 1) = std::cos(theta);
    } else {
      d(pos, pos) = std::polar(1.0, theta);
      d(pos + 1, pos + 1) = std::polar(1.0, -theta);
    }
    pos += 2;
  }
  for (int i = 0; i < a; ++i) d(pos + i, pos + i) = 1.0;
  pos += a;
  for (int i = 0; i < b; ++i) d(pos + i, pos + i) = -1.0;
  if (field == Field::Real) {
    RealMatrix q = haar_orthogonal(n, rng);
    return (q * d.real() * q.transpose()).cast<Complex>();
  }
  ComplexMatrix q = haar_unitary(n, rng);
  return q * d * q.adjoint();
}

void criterion4() {
  Rng rng(404);
  int bad = 0;
  for (Field field : {Field::Real, Field::Complex})
    for (int n = 2; n <= 6; ++n)
      for (int k = 1; k < n; ++k)
        for (int kp = 1; kp <= k && k + kp <= n; ++kp) {
          phi::PhiSignature sig{field, n, {k, kp}};
          for (int rep = 0; rep < 500; ++rep) {
            auto x = grassmann::gr_sample(field, k, n, rng.next());
            auto y = grassmann::gr_sample(field, kp, n, rng.next());
            if (!phi::member_phi2(x.m * y.m, sig)) ++bad;
          }
          // single-condition violations must all be rejected
          std::vector<std::array<int, 3>> probes;
          probes.push_back({kp - 1, n - k - kp + 1, k - kp + 1});  // parity break
          if (k - kp >= 2) probes.push_back({kp, n - k - kp + 2, k - kp - 2});
          if (n - k - kp >= 2) probes.push_back({kp + 1, n - k - kp - 2, k - kp});
          for (const auto& pr : probes)
            for (int rep = 0; rep < 50; ++rep) {
              ComplexMatrix z = profile_matrix(field, n, pr[0], pr[1], pr[2], rng);
              if (phi::member_phi2(z, sig)) ++bad;
            }
        }
  report(4, "membership spectral criterion", bad == 0, std::to_string(bad) + " disagreements");
}

// --- criterion 5: reflection length ------------------------------------------
void criterion5() {
  Rng rng(505);
  int bad = 0;
  for (int rep = 0; rep < 200; ++rep) {
    int n = 2 + int(rng.next() % 29);
    int k = 1 + int(rng.next() % (n - 1));
    auto p = grassmann::gr_sample(Field::Complex, k, n, rng.next());
    if (phi::reflection_length(p.m) != n - k) ++bad;
  }
  for (int n : {3, 6, 10}) {
    ComplexMatrix w = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) w(i, i) = std::polar(1.0, -2.0 * kPi / n);
    if (phi::reflection_length(w) != 2 * n - 2) ++bad;
  }
  for (int rep = 0; rep < 1000; ++rep) {
    int n = 2 + int(rng.next() % 9);
    ComplexMatrix u = haar_special_unitary(n, rng);
    if (phi::reflection_length(u) > 2 * n - 2) ++bad;
    ComplexMatrix v = haar_special_unitary(n, rng);
    v.col(0) *= -1.0;
    if (phi::reflection_length(v) > 2 * n - 1) ++bad;
  }
  report(5, "reflection length formula", bad == 0, std::to_string(bad) + " failures");
}

// --- criterion 6: four-factor classification + constructive splits -----------
void criterion6() {
  using phi::Phi4Class;
  int bad = 0;
  // table reproduction for n <= 12: enumerate all descending normalized tuples
  for (int n = 2; n <= 12; ++n)
    for (int k1 = 1; k1 < n; ++k1)
      for (int k2 = 1; k2 <= k1 && k1 + k2 <= n; ++k2)
        for (int k3 = 1; k3 <= k2; ++k3)
          for (int k4 = 1; k4 <= k3; ++k4) {
            phi::PhiSignature sig{Field::Complex, n, {k1, k2, k3, k4}};
            Phi4Class got = phi::classify_phi4_complex(sig);
            Phi4Class want = Phi4Class::ProperSubset;
            int k = n / 2;
            if (n % 2 == 0) {
              if (k1 == k && k2 == k && k3 == k && k4 == k) want = Phi4Class::FullSU;
              else if (k >= 2 && k1 == k && k2 == k && k3 == k - 1 && k4 == k - 1)
                want = Phi4Class::FullSU;
              else if (k >= 3 && k1 == k && k2 == k && k3 == k && k4 == k - 2)
                want = Phi4Class::FullSU;
              else if (k >= 2 && k1 == k && k2 == k && k3 == k && k4 == k - 1)
                want = Phi4Class::FullAntiSU;
            } else {
              if (k1 == k && k2 == k && k3 == k && k4 == k) want = Phi4Class::FullSU;
              else if (k1 == k + 1 && k2 == k && k3 == k && k4 == k)
                want = Phi4Class::FullAntiSU;
            }
            if (got != want) ++bad;
          }
  // constructive splits for each full-group signature
  Rng rng(606);
  for (int n = 2; n <= 12; ++n) {
    int k = n / 2;
    std::vector<std::pair<std::vector<int>, bool>> sigs;  // (tuple, anti)
    if (n % 2 == 0) {
      sigs.push_back({{k, k, k, k}, false});
      if (k >= 2) sigs.push_back({{k, k, k - 1, k - 1}, false});
      if (k >= 2) sigs.push_back({{k, k, k, k - 1}, true});
    } else {
      sigs.push_back({{k, k, k, k}, false});
      sigs.push_back({{k + 1, k, k, k}, true});
    }
    for (const auto& [ks, anti] : sigs)
      for (int rep = 0; rep < 50; ++rep) {
        ComplexMatrix z = haar_special_unitary(n, rng);
        if (anti) z.col(0) *= -1.0;
        try {
          auto f = decompose::decompose_su_signature(
              z, phi::PhiSignature{Field::Complex, n, ks});
          bool ok = f.residual <= 1e-9 * n;
          for (int i = 0; i < 4; ++i)
            ok = ok && f.factors[i].k == ks[i] && factor_point_ok(f.factors[i], 1e-9);
          if (!ok) ++bad;
        } catch (const std::exception&) {
          ++bad;
        }
      }
  }
  for (int k : {3, 4})
    for (int rep = 0; rep < 50; ++rep) {
      int n = 2 * k;
      ComplexMatrix z = haar_special_unitary(n, rng);
      try {
        auto f = decompose::decompose_su_kkkk2(z);
        bool ok = f.residual <= 1e-9 * n && f.factors[3].k == k - 2;
        for (const auto& p : f.factors) ok = ok && factor_point_ok(p, 1e-9);
        if (!ok) ++bad;
      } catch (const std::exception&) {
        ++bad;
      }
    }
  report(6, "four-factor classification and splits", bad == 0,
         std::to_string(bad) + " failures");
}

// --- criterion 7: phase system ------------------------------------------------
void criterion7() {
  Rng rng(707);
  int bad = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    std::array<double, 4> t{};
    double s = 0;
    for (int i = 0; i < 3; ++i) {
      t[i] = std::remainder(3.0 * rng.normal(), 2 * kPi);
      s += t[i];
    }
    t[3] = std::remainder(-s, 2 * kPi);
    try {
      auto sol = decompose::solve_phase_system(t);
      if (sol.residual > 1e-9) ++bad;
    } catch (const std::exception&) {
      ++bad;
    }
  }
  report(7, "corner phase system", bad == 0, std::to_string(bad) + " failures of 10000");
}

// --- criterion 8: symplectic model invariants ---------------------------------
void criterion8() {
  int bad = 0;
  Rng rng(808);
  // closure of four-point products
  for (int rep = 0; rep < 200; ++rep) {
    int n = 1 + int(rng.next() % 10);
    ComplexMatrix p = ComplexMatrix::Identity(2 * n, 2 * n);
    for (int i = 0; i < 4; ++i)
      p = p * sp::spgr_from_conjugation(sp::sp_sample(Field::Complex, n, rng.next()), n / 2).m;
    ComplexMatrix j = sp::sp_form(n).cast<Complex>();
    if ((p.transpose() * j * p - j).norm() > 1e-9 * n) ++bad;
  }
  // psi1 validity + psi2(psi1) agreement with the direct realified projector
  for (int rep = 0; rep < 200; ++rep) {
    int n = 1 + int(rng.next() % 10);
    int k = int(rng.next() % (n + 1));
    auto u = grassmann::gr_sample(Field::Complex, k, n, rng.next());
    auto x = sp::psi1(u);
    if (!sp::spgr_validate(x.m, k).ok || x.k != k) ++bad;
    auto via = sp::psi2(x);
    ComplexMatrix b = grassmann::gr_basis_of(u);
    RealMatrix br(2 * n, 2 * k);
    br.topLeftCorner(n, k) = b.real();
    br.topRightCorner(n, k) = b.imag();
    br.bottomLeftCorner(n, k) = -b.imag();
    br.bottomRightCorner(n, k) = b.real();
    RealMatrix direct = -RealMatrix::Identity(2 * n, 2 * n);
    if (k > 0)
      direct += 2.0 * br * (br.transpose() * br).inverse() * br.transpose();
    if ((via.m.real() - direct).norm() > 1e-10) ++bad;
  }
  // stabilizer invariance: multiplying q by a block matrix commuting with the
  // canonical point must not change the conjugated point
  for (int rep = 0; rep < 200; ++rep) {
    int n = 2 + int(rng.next() % 9);
    int k = 1 + int(rng.next() % (n - 1));
    auto q = sp::sp_sample(Field::Real, n, rng.next());
    auto s1 = sp::sp_sample(Field::Real, k, rng.next());
    auto s2 = sp::sp_sample(Field::Real, n - k, rng.next());
    ComplexMatrix s = ComplexMatrix::Identity(2 * n, 2 * n);
    auto embed = [&](const ComplexMatrix& blk, int off, int m) {
      for (int a = 0; a < m; ++a)
        for (int b2 = 0; b2 < m; ++b2) {
          s(off + a, off + b2) = blk(a, b2);
          s(off + a, n + off + b2) = blk(a, m + b2);
          s(n + off + a, off + b2) = blk(m + a, b2);
          s(n + off + a, n + off + b2) = blk(m + a, m + b2);
        }
    };
    embed(s1.m, 0, k);
    embed(s2.m, k, n - k);
    sp::SymplecticMatrix qs{Field::Real, n, q.m * s};
    auto a = sp::spgr_from_conjugation(q, k);
    auto b = sp::spgr_from_conjugation(qs, k);
    if ((a.m - b.m).norm() > 1e-10 * (a.m.norm() + 1)) ++bad;
  }
  // injectivity spot checks for psi2
  for (int rep = 0; rep < 200; ++rep) {
    int n = 2 + int(rng.next() % 9);
    int k = 1 + int(rng.next() % (n - 1));
    auto x1 = sp::spgr_from_conjugation(sp::sp_sample(Field::Real, n, rng.next()), k);
    auto x2 = sp::spgr_from_conjugation(sp::sp_sample(Field::Real, n, rng.next()), k);
    if ((x1.m - x2.m).norm() > 1e-6 && (sp::psi2(x1).m - sp::psi2(x2).m).norm() <= 1e-8) ++bad;
  }
  report(8, "symplectic model invariants", bad == 0, std::to_string(bad) + " failures");
}

// --- criterion 9: symplectic four-factor --------------------------------------
void criterion9() {
  int bad = 0, nongeneric = 0, total = 0, success = 0;
  Rng rng(909);
  for (int n = 2; n <= 6; ++n)
    for (int rep = 0; rep < 100; ++rep) {
      ++total;
      auto x = sp::sp_sample(Field::Complex, n, rng.next());
      try {
        auto f = sp::decompose_sp_four(x);
        bool ok = f.factors.size() == 4 && f.residual <= 1e-7 * n;
        for (const auto& y : f.factors) ok = ok && sp::spgr_validate(y.m, y.k, 1e-7).ok;
        if (ok)
          ++success;
        else
          ++bad;  // a wrong factorization is never acceptable
      } catch (const NonGeneric&) {
        ++nongeneric;
      } catch (const std::exception&) {
        ++bad;
      }
    }
  bool rate_ok = success >= (total * 95) / 100;
  // containment direction over both fields
  int closure_bad = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    int n = 1 + int(rng.next() % 6);
    Field f = rep % 2 == 0 ? Field::Real : Field::Complex;
    ComplexMatrix p = ComplexMatrix::Identity(2 * n, 2 * n);
    for (int i = 0; i < 4; ++i)
      p = p * sp::spgr_from_conjugation(sp::sp_sample(f, n, rng.next()), n / 2).m;
    ComplexMatrix j = sp::sp_form(n).cast<Complex>();
    if ((p.transpose() * j * p - j).norm() > 1e-9 * n) ++closure_bad;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%d/%d succeeded, %d non-generic, %d wrong, closure failures %d", success, total,
                nongeneric, bad, closure_bad);
  report(9, "symplectic four-factor", rate_ok && bad == 0 && closure_bad == 0, buf);
}

// --- criterion 10: CLI determinism and exit codes ------------------------------
struct CliResult {
  int code = -1;
  std::string out;
};

CliResult cli(const std::string& args) {
  std::string cmd = std::string(CLI_BINARY_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  CliResult r;
  if (!pipe) return r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void criterion10() {
  int bad = 0;
  fs::path dir = fs::temp_directory_path() / "grassfactor_acceptance";
  fs::create_directories(dir);

  // byte determinism across repeated identical invocations
  for (const std::string& args :
       {std::string("sample --model su --field complex --n 6 --seed 11"),
        std::string("sample --model sp --field complex --n 3 --seed 4"),
        std::string("dim --field complex --k 2 --kprime 1 --n 5")}) {
    auto a = cli(args);
    auto b = cli(args);
    if (a.code != 0 || a.out != b.out || a.out.empty()) ++bad;
  }
  auto sample = cli("sample --model so --n 6 --seed 2");
  fs::path so6 = dir / "so6.json";
  json_io::write_file(so6.string(), sample.out);
  auto d1 = cli("decompose --group so --in " + so6.string());
  auto d2 = cli("decompose --group so --in " + so6.string());
  if (d1.code != 0 || d1.out != d2.out) ++bad;

  // exit-code contract, one probe per class
  if (cli("decompose --group so --in " + (dir / "missing.json").string()).code != 1) ++bad;
  Rng rng(1010);
  RealMatrix z = haar_special_orthogonal(4, rng);
  z.col(0) *= -1;
  fs::path det = dir / "det_minus.json";
  json_io::write_file(det.string(),
                      json_io::serialize(json_io::make_matrix_document(
                          Field::Real, z.cast<Complex>())));
  if (cli("decompose --group so --in " + det.string()).code != 2) ++bad;
  auto spr = cli("sample --model sp --field real --n 2 --seed 9");
  fs::path sp_real = dir / "sp_real.json";
  json_io::write_file(sp_real.string(), spr.out);
  if (cli("decompose --group sp --in " + sp_real.string()).code != 3) ++bad;
  if (cli("sample --model so --n 5 --seed 1").code != 0) ++bad;

  report(10, "CLI determinism and exit codes", bad == 0, std::to_string(bad) + " failures");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  return failures;
}
