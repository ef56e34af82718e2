// Command-line front end: JSON matrices in, deterministic JSON out.
// Exit codes: 0 success, 1 I/O or parse error, 2 validation error,
// 3 unsupported input (non-generic spectrum, out-of-scope field, ...).

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "grassfactor/decompose.hpp"
#include "grassfactor/grassmann.hpp"
#include "grassfactor/json_io.hpp"
#include "grassfactor/phi.hpp"
#include "grassfactor/random.hpp"
#include "grassfactor/symplectic.hpp"
#include "grassfactor/types.hpp"

namespace gf = grassfactor;
namespace io = gf::json_io;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

gf::Field parse_field(const std::string& s) {
  if (s == "real") return gf::Field::Real;
  if (s == "complex") return gf::Field::Complex;
  throw gf::BadDimensions("field must be \"real\" or \"complex\"");
}

io::MatrixDocument load(const std::string& path) {
  return io::parse_matrix_document(io::read_file(path));
}

int infer_sp_half_rank(const gf::ComplexMatrix& m) {
  int n2 = int(m.rows());
  double kf = (m.trace().real() + n2) / 4.0;
  int k = int(std::lround(kf));
  if (std::abs(kf - k) > 1e-6)
    throw gf::InvalidPoint("trace is not of the form 4k - 2n");
  return k;
}

struct Args {
  std::string group, in_path, model, field = "real", map, signature;
  double tol = gf::env_or_default_tol();
  std::uint64_t seed = 0;
  int k = -1, kprime = -1, n = 0;
};

int run_decompose(const Args& a) {
  io::MatrixDocument doc = load(a.in_path);
  io::FactorizationDocument out;
  out.target = doc;
  auto add_gr = [&](const std::vector<gf::grassmann::GrassPoint>& fs) {
    for (const auto& f : fs)
      out.factors.push_back({io::make_matrix_document(f.field, f.m), "gr", f.k});
  };
  if (a.group == "so" || a.group == "so-") {
    if (doc.field != gf::Field::Real)
      throw gf::BadDimensions("decompose --group so: real input required");
    auto f = a.group == "so" ? gf::decompose::decompose_so(doc.m.real(), a.tol)
                             : gf::decompose::decompose_so_minus(doc.m.real(), a.tol);
    add_gr(f.factors);
    out.residual = f.residual;
    out.group = a.group;
  } else if (a.group == "su" || a.group == "su-" || a.group == "su-sig" ||
             a.group == "su-kkkk2") {
    gf::decompose::Factorization f;
    if (a.group == "su") {
      f = gf::decompose::decompose_su(doc.m, a.tol);
    } else if (a.group == "su-") {
      f = gf::decompose::decompose_su_minus(doc.m, a.tol);
    } else if (a.group == "su-kkkk2") {
      f = gf::decompose::decompose_su_kkkk2(doc.m, a.tol);
    } else {
      gf::phi::PhiSignature sig{gf::Field::Complex, int(doc.m.rows()), {}};
      std::stringstream ss(a.signature);
      std::string tok;
      while (std::getline(ss, tok, ',')) sig.k.push_back(std::stoi(tok));
      f = gf::decompose::decompose_su_signature(doc.m, sig, a.tol);
    }
    add_gr(f.factors);
    out.residual = f.residual;
    out.group = a.group == "su-" ? "su-" : "su";
  } else if (a.group == "sp") {
    gf::symplectic::SymplecticMatrix x{doc.field, int(doc.m.rows()) / 2, doc.m};
    auto f = gf::symplectic::decompose_sp_four(x, a.tol);
    for (const auto& y : f.factors)
      out.factors.push_back({io::make_matrix_document(y.field, y.m), "grsp", y.k});
    out.residual = f.residual;
    out.group = "sp";
  } else {
    throw gf::BadDimensions("unknown --group");
  }
  std::cout << io::serialize(out) << "\n";
  std::cerr << "residual " << fmt(out.residual) << "\n";
  return 0;
}

int run_verify(const Args& a) {
  io::MatrixDocument doc = load(a.in_path);
  bool ok;
  std::string report;
  if (a.model == "gr") {
    gf::grassmann::GrassPoint p{doc.field, int(doc.m.rows()), a.k, doc.m};
    auto r = gf::grassmann::gr_validate(p, a.tol);
    ok = r.ok;
    report = std::string("{\"ok\":") + (r.ok ? "true" : "false") +
             ",\"involution_residual\":" + fmt(r.involution_residual) +
             ",\"hermitian_residual\":" + fmt(r.hermitian_residual) +
             ",\"trace_residual\":" + fmt(r.trace_residual) +
             ",\"imaginary_residual\":" + fmt(r.imaginary_residual) + "}";
  } else if (a.model == "grsp") {
    auto r = gf::symplectic::spgr_validate(doc.m, a.k, a.tol);
    ok = r.ok;
    report = std::string("{\"ok\":") + (r.ok ? "true" : "false") +
             ",\"involution_residual\":" + fmt(r.involution_residual) +
             ",\"symplectic_residual\":" + fmt(r.symplectic_residual) +
             ",\"trace_residual\":" + fmt(r.trace_residual) + "}";
  } else {
    throw gf::BadDimensions("--model must be gr or grsp");
  }
  std::cout << report << "\n";
  return ok ? 0 : 2;
}

int run_member(const Args& a) {
  io::MatrixDocument doc = load(a.in_path);
  gf::phi::PhiSignature sig{parse_field(a.field), int(doc.m.rows()), {a.k, a.kprime}};
  auto norm = gf::phi::normalize_signature(sig);
  bool member = gf::phi::member_phi2(doc.m, norm.sig, a.tol);
  std::cout << (member ? "{\"member\":true}" : "{\"member\":false}") << "\n";
  return 0;
}

int run_dim(const Args& a) {
  long long d = gf::phi::phi_dim(parse_field(a.field), a.k, a.kprime, a.n);
  std::cout << "{\"dim\":" << d << "}\n";
  return 0;
}

int run_length(const Args& a) {
  io::MatrixDocument doc = load(a.in_path);
  int len = gf::phi::reflection_length(doc.m, a.tol);
  std::cout << "{\"length\":" << len << "}\n";
  return 0;
}

int run_sample(const Args& a) {
  gf::Field field = parse_field(a.field);
  gf::Rng rng(a.seed);
  io::MatrixDocument out;
  if (a.model == "so") {
    out = io::make_matrix_document(gf::Field::Real,
                                   gf::haar_special_orthogonal(a.n, rng).cast<gf::Complex>());
  } else if (a.model == "su") {
    out = io::make_matrix_document(gf::Field::Complex, gf::haar_special_unitary(a.n, rng));
  } else if (a.model == "sp") {
    auto s = gf::symplectic::sp_sample(field, a.n, a.seed);
    out = io::make_matrix_document(s.field, s.m);
  } else if (a.model == "gr") {
    auto p = gf::grassmann::gr_sample(field, a.k, a.n, a.seed);
    out = io::make_matrix_document(p.field, p.m);
  } else if (a.model == "grsp") {
    auto q = gf::symplectic::sp_sample(field, a.n, a.seed);
    auto p = gf::symplectic::spgr_from_conjugation(q, a.k);
    out = io::make_matrix_document(p.field, p.m);
  } else {
    throw gf::BadDimensions("--model must be one of so, su, sp, gr, grsp");
  }
  std::cout << io::serialize(out) << "\n";
  return 0;
}

int run_embed(const Args& a) {
  io::MatrixDocument doc = load(a.in_path);
  if (a.map == "psi1") {
    auto u = gf::grassmann::gr_from_matrix(gf::Field::Complex, doc.m, a.tol);
    auto x = gf::symplectic::psi1(u, a.tol);
    std::cout << io::serialize(io::make_matrix_document(gf::Field::Real, x.m)) << "\n";
  } else if (a.map == "psi2") {
    if (doc.field != gf::Field::Real)
      throw gf::BadDimensions("embed --map psi2: real input required");
    gf::symplectic::SpGrassPoint x{gf::Field::Real, int(doc.m.rows()) / 2,
                                   infer_sp_half_rank(doc.m), doc.m};
    auto g = gf::symplectic::psi2(x, a.tol);
    std::cout << io::serialize(io::make_matrix_document(gf::Field::Real, g.m)) << "\n";
  } else {
    throw gf::BadDimensions("--map must be psi1 or psi2");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grassmannian involution factorization toolkit"};
  app.require_subcommand(1);
  Args a;

  auto* dec = app.add_subcommand("decompose", "factor a group element into involutions");
  dec->add_option("--group", a.group, "so|so-|su|su-|su-sig|su-kkkk2|sp")->required();
  dec->add_option("--in", a.in_path, "input MatrixDocument")->required();
  dec->add_option("--tol", a.tol, "tolerance");
  dec->add_option("--seed", a.seed, "seed (reserved)");
  dec->add_option("--signature", a.signature, "k1,k2,k3,k4 (su-sig)");

  auto* ver = app.add_subcommand("verify", "validate an involution point");
  ver->add_option("--model", a.model, "gr|grsp")->required();
  ver->add_option("--k", a.k, "expected rank parameter")->required();
  ver->add_option("--in", a.in_path)->required();
  ver->add_option("--tol", a.tol);

  auto* mem = app.add_subcommand("member", "two-factor membership test");
  mem->add_option("--field", a.field, "real|complex")->required();
  mem->add_option("--k", a.k)->required();
  mem->add_option("--kprime", a.kprime)->required();
  mem->add_option("--in", a.in_path)->required();
  mem->add_option("--tol", a.tol);

  auto* dim = app.add_subcommand("dim", "dimension of a two-factor product set");
  dim->add_option("--field", a.field)->required();
  dim->add_option("--k", a.k)->required();
  dim->add_option("--kprime", a.kprime)->required();
  dim->add_option("--n", a.n)->required();

  auto* len = app.add_subcommand("length", "reflection length of a (anti-)special unitary");
  len->add_option("--in", a.in_path)->required();
  len->add_option("--tol", a.tol);

  auto* smp = app.add_subcommand("sample", "deterministic random matrices");
  smp->add_option("--model", a.model, "so|su|sp|gr|grsp")->required();
  smp->add_option("--field", a.field);
  smp->add_option("--n", a.n)->required();
  smp->add_option("--k", a.k);
  smp->add_option("--seed", a.seed);

  auto* emb = app.add_subcommand("embed", "realification embeddings");
  emb->add_option("--map", a.map, "psi1|psi2")->required();
  emb->add_option("--in", a.in_path)->required();
  emb->add_option("--tol", a.tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  try {
    if (dec->parsed()) return run_decompose(a);
    if (ver->parsed()) return run_verify(a);
    if (mem->parsed()) return run_member(a);
    if (dim->parsed()) return run_dim(a);
    if (len->parsed()) return run_length(a);
    if (smp->parsed()) return run_sample(a);
    if (emb->parsed()) return run_embed(a);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const gf::UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const gf::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
