#include <cmath>
#include <numbers>

#include "dgnn/models.hpp"

namespace dgnn {

namespace {

using std::numbers::pi;

// Component of an axis-aligned normal along its (single) nonzero axis.
double along(const Point& n) { return n[0] + n[1] + n[2] + n[3]; }

LossTerm interface_term(std::string name, FaceCategory cat, int lambda,
                        std::function<Bundle(const Point&, const Point&)> coef) {
  LossTerm t;
  t.name = std::move(name);
  t.kind = TermKind::Interface;
  t.category = cat;
  t.lambda_index = lambda;
  t.coef = std::move(coef);
  return t;
}

LossTerm face_term(std::string name, TermKind kind, FaceCategory cat, int lambda,
                   std::function<Bundle(const Point&, const Point&)> coef) {
  LossTerm t = interface_term(std::move(name), cat, lambda, std::move(coef));
  t.kind = kind;
  return t;
}

LossTerm interior_term(std::function<Bundle(const Point&, const Point&)> coef) {
  LossTerm t;
  t.name = "interior";
  t.kind = TermKind::Interior;
  t.lambda_index = 0;
  t.coef = std::move(coef);
  return t;
}

// [[u]] and [[grad u]]_N on every interior face of a stationary mesh.
void add_elliptic_jumps(PDEModel& m) {
  m.terms.push_back(interface_term("jump_u", FaceCategory::InteriorTimeLike, 2, [](const Point&, const Point& n) {
    Bundle b;
    b.value = along(n);
    return b;
  }));
  m.terms.push_back(interface_term("jump_grad", FaceCategory::InteriorTimeLike, 3,
                                   [d = m.dim](const Point&, const Point& n) {
                                     Bundle b;
                                     for (int a = 0; a < d; ++a) b.grad[a] = n[a];
                                     return b;
                                   }));
}

}  // namespace

const LossTerm* PDEModel::interior_term() const {
  for (const LossTerm& t : terms) {
    if (t.kind == TermKind::Interior) return &t;
  }
  return nullptr;
}

Complex PDEModel::term_data(const LossTerm& term, const Point& x, const Point& n) const {
  if (term.kind == TermKind::Interface) return {};
  if (term.kind == TermKind::Interior) return source(x);
  return apply(term.coef(x, n), exact(x), dim);
}

Complex PDEModel::interior_residual(const Bundle& v, const Point& x) const {
  const LossTerm* t = interior_term();
  return apply(t->coef(x, Point{}), v, dim) - source(x);
}

bool PDEModel::trefftz_for(const ActivationFamily& family) const {
  switch (family.tag) {
    case FamilyTag::PlaneWave:
      return kind == ModelKind::Helmholtz && constant_rho && *constant_rho == 1.0 && family.omega == omega;
    case FamilyTag::PolyWave:
      return kind == ModelKind::Wave && constant_speed && *constant_speed == family.wavespeed;
    default:
      return false;
  }
}

PDEModel poisson_2d() {
  PDEModel m;
  m.name = "poisson";
  m.kind = ModelKind::Poisson;
  m.dim = 2;
  m.bounds = {{0.0, 1.0}, {0.0, 1.0}};
  m.terms.push_back(interior_term([](const Point&, const Point&) {
    Bundle b;
    b.second[0] = b.second[1] = -1.0;
    return b;
  }));
  m.terms.push_back(face_term("boundary", TermKind::Boundary, FaceCategory::Boundary, 1,
                              [](const Point&, const Point&) {
                                Bundle b;
                                b.value = 1.0;
                                return b;
                              }));
  add_elliptic_jumps(m);
  m.lambda_names = {"interior", "boundary", "jump_u", "jump_grad"};
  m.lambda_init = {1.0, 200.0 * pi, 200.0 * pi, 1.0};
  m.source = [](const Point& x) { return Complex(x[0] * std::cos(x[1])); };
  m.exact = [](const Point& x) {
    Bundle b;
    const double c = std::cos(x[1]), s = std::sin(x[1]);
    b.value = x[0] * c;
    b.grad[0] = c;
    b.grad[1] = -x[0] * s;
    b.second[1] = -x[0] * c;
    return b;
  };
  return m;
}

PDEModel helmholtz_2d(double omega, const std::string& rho_kind) {
  PDEModel m;
  m.kind = ModelKind::Helmholtz;
  m.dim = 2;
  m.bounds = {{0.0, 1.0}, {0.0, 1.0}};
  m.complex_valued = true;
  m.omega = omega;
  const double w = omega;
  if (rho_kind == "const") {
    m.name = "helmholtz";
    m.constant_rho = 1.0;
    m.rho = [](const Point&) { return 1.0; };
    m.source = [w](const Point& x) { return Complex((1.0 - w * w) * w * x[0] * std::cos(x[1])); };
    m.exact = [w](const Point& x) {
      Bundle b;
      const double cy = std::cos(x[1]), sy = std::sin(x[1]);
      const double cx = std::cos(w * x[0]), sx = std::sin(w * x[0]);
      b.value = w * x[0] * cy + x[1] * sx;
      b.grad[0] = w * cy + w * x[1] * cx;
      b.grad[1] = -w * x[0] * sy + sx;
      b.second[0] = -w * w * x[1] * sx;
      b.second[1] = -w * x[0] * cy;
      return b;
    };
  } else if (rho_kind == "radial") {
    m.name = "helmholtz-radial";
    m.rho = [](const Point& x) { return x[0] * x[0] + x[1] * x[1]; };
    m.source = [w](const Point& x) {
      const double rho = x[0] * x[0] + x[1] * x[1];
      return Complex(w * w * x[1] * std::sin(w * x[0]) * (1.0 - rho));
    };
    m.exact = [w](const Point& x) {
      Bundle b;
      const double cx = std::cos(w * x[0]), sx = std::sin(w * x[0]);
      b.value = x[1] * sx;
      b.grad[0] = w * x[1] * cx;
      b.grad[1] = sx;
      b.second[0] = -w * w * x[1] * sx;
      return b;
    };
  } else {
    throw ConfigError("unknown Helmholtz coefficient '" + rho_kind + "' (expected const or radial)");
  }
  m.terms.push_back(interior_term([w, rho = m.rho](const Point& x, const Point&) {
    Bundle b;
    b.value = -w * w * rho(x);
    b.second[0] = b.second[1] = -1.0;
    return b;
  }));
  m.terms.push_back(face_term("boundary", TermKind::Boundary, FaceCategory::Boundary, 1,
                              [w](const Point&, const Point& n) {
                                Bundle b;
                                b.value = Complex(0.0, w);
                                b.grad[0] = n[0];
                                b.grad[1] = n[1];
                                return b;
                              }));
  add_elliptic_jumps(m);
  m.lambda_names = {"interior", "boundary", "jump_u", "jump_grad"};
  m.lambda_init = {1.0, w * w, w * w * w * w, w * w};
  return m;
}

PDEModel wave_1p1d(const std::string& speed_kind, double speed) {
  PDEModel m;
  m.kind = ModelKind::Wave;
  m.dim = 2;
  m.time_axis = 1;
  m.bounds = {{0.0, 1.0}, {0.0, 1.0}};
  if (speed_kind == "const") {
    if (!(speed > 0.0)) throw ConfigError("wavespeed must be positive");
    m.name = "wave";
    m.constant_speed = speed;
    m.wavespeed = [speed](const Point&) { return speed; };
  } else if (speed_kind == "linear") {
    m.name = "wave-linear";
    m.wavespeed = [](const Point& x) { return x[0] + 1.0; };
  } else {
    throw ConfigError("unknown wavespeed '" + speed_kind + "' (expected const or linear)");
  }
  const double k = std::sqrt(2.0) * pi;
  auto c = m.wavespeed;
  m.source = [c, k](const Point& x) {
    const double cc = c(x);
    return Complex((pi * pi - k * k / (cc * cc)) * std::sin(pi * x[0]) * std::sin(k * x[1]));
  };
  m.exact = [k](const Point& x) {
    Bundle b;
    const double sx = std::sin(pi * x[0]), cx = std::cos(pi * x[0]);
    const double st = std::sin(k * x[1]), ct = std::cos(k * x[1]);
    b.value = sx * st;
    b.grad[0] = pi * cx * st;
    b.grad[1] = k * sx * ct;
    b.second[0] = -pi * pi * sx * st;
    b.second[1] = -k * k * sx * st;
    return b;
  };
  m.terms.push_back(interior_term([c](const Point& x, const Point&) {
    Bundle b;
    const double cc = c(x);
    b.second[0] = -1.0;
    b.second[1] = 1.0 / (cc * cc);
    return b;
  }));
  // Gamma_D is the whole spatial boundary: d_t u = g_D there.
  m.terms.push_back(face_term("dirichlet", TermKind::Boundary, FaceCategory::Boundary, 1,
                              [](const Point&, const Point&) {
                                Bundle b;
                                b.grad[1] = 1.0;
                                return b;
                              }));
  m.terms.push_back(face_term("initial_u", TermKind::Initial, FaceCategory::Initial, 2,
                              [](const Point&, const Point&) {
                                Bundle b;
                                b.value = 1.0;
                                return b;
                              }));
  m.terms.push_back(face_term("initial_ut", TermKind::Initial, FaceCategory::Initial, 2,
                              [](const Point&, const Point&) {
                                Bundle b;
                                b.grad[1] = 1.0;
                                return b;
                              }));
  const FaceCategory tl = FaceCategory::InteriorTimeLike;
  const FaceCategory sl = FaceCategory::InteriorSpaceLike;
  m.terms.push_back(interface_term("C1", tl, 3, [](const Point&, const Point& n) {
    Bundle b;
    b.value = n[0];
    return b;
  }));
  m.terms.push_back(interface_term("C2", tl, 4, [](const Point&, const Point& n) {
    Bundle b;
    b.grad[1] = n[0];
    return b;
  }));
  m.terms.push_back(interface_term("C3", tl, 5, [](const Point&, const Point& n) {
    Bundle b;
    b.grad[0] = -n[0];
    return b;
  }));
  m.terms.push_back(interface_term("C4", sl, 6, [](const Point&, const Point& n) {
    Bundle b;
    b.value = n[1];
    return b;
  }));
  m.terms.push_back(interface_term("C5", sl, 7, [](const Point&, const Point& n) {
    Bundle b;
    b.grad[1] = n[1];
    return b;
  }));
  m.terms.push_back(interface_term("C6", sl, 8, [](const Point&, const Point& n) {
    Bundle b;
    b.grad[0] = -n[1];
    return b;
  }));
  m.lambda_names = {"interior", "boundary", "initial", "C1", "C2", "C3", "C4", "C5", "C6"};
  m.lambda_init = {1.0 / (pi * pi), 1.0, pi * pi, 1.0, pi * pi, 1.0, 1.0, pi * pi, 1.0};
  return m;
}

PDEModel make_model(const std::string& name, double omega, const std::string& coefficient, double speed) {
  if (name == "poisson") return poisson_2d();
  if (name == "helmholtz") return helmholtz_2d(omega, coefficient.empty() ? "const" : coefficient);
  if (name == "wave") return wave_1p1d(coefficient.empty() ? "const" : coefficient, speed);
  throw ConfigError("unknown model '" + name + "' (expected poisson, helmholtz or wave)");
}

double trefftz_residual(const ElementNetwork& net, const PDEModel& model, const std::vector<Point>& samples) {
  const LossTerm* t = model.interior_term();
  double worst = 0.0;
  for (const Point& x : samples) {
    worst = std::max(worst, std::abs(apply(t->coef(x, Point{}), net.eval(x), model.dim)));
  }
  return worst;
}

}  // namespace dgnn
