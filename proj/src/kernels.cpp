#include "spectrakit/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace spectrakit {

void KernelSpec::validate() const {
    if (id == KernelId::VonMises) {
        if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("kernel: tau must be positive");
        if (mu != 0.0) throw std::invalid_argument("kernel: von Mises kernel supports mu = 0 only");
    }
    if (id == KernelId::BHEP && (d < 1 || d > 3)) throw std::invalid_argument("kernel: BHEP needs d in 1..3");
    if (id != KernelId::BHEP && d != 1) throw std::invalid_argument("kernel: only BHEP is multivariate");
    if (id == KernelId::Constant && !std::isfinite(value)) throw std::invalid_argument("kernel: bad constant");
}

Support kernel_support(const KernelSpec& spec) {
    switch (spec.id) {
    case KernelId::CvM:
    case KernelId::HN2000:
    case KernelId::EKS2021: return Support::UnitInterval;
    case KernelId::BH_rho:
    case KernelId::K0_exp:
    case KernelId::K2001: return Support::HalfLine;
    case KernelId::EbnerKZ:
    case KernelId::HJM_C:
    case KernelId::DEH_K: return Support::RealLine;
    case KernelId::VonMises: return Support::Naturals;
    case KernelId::BHEP: return spec.d == 1 ? Support::RealLine : Support::RealSpace;
    case KernelId::Constant: return Support::Any;
    }
    return Support::Any;
}

bool is_kinked(KernelId id) {
    switch (id) {
    case KernelId::CvM:
    case KernelId::HN2000:
    case KernelId::EKS2021:
    case KernelId::BH_rho:
    case KernelId::K0_exp:
    case KernelId::K2001: return true;
    default: return false;
    }
}

bool is_reflection_symmetric(KernelId id) {
    switch (id) {
    case KernelId::EbnerKZ:
    case KernelId::HJM_C:
    case KernelId::DEH_K:
    case KernelId::BHEP:
    case KernelId::Constant: return true;
    default: return false;
    }
}

BasisKind natural_basis(KernelId id) {
    switch (id) {
    case KernelId::CvM:
    case KernelId::HN2000:
    case KernelId::EKS2021: return BasisKind::Legendre01;
    case KernelId::BH_rho:
    case KernelId::K0_exp:
    case KernelId::K2001: return BasisKind::LaguerreExp;
    case KernelId::EbnerKZ:
    case KernelId::HJM_C:
    case KernelId::DEH_K: return BasisKind::HermiteGauss;
    case KernelId::VonMises: return BasisKind::CharlierPoisson;
    case KernelId::BHEP: return BasisKind::TensorHermite;
    case KernelId::Constant: return BasisKind::Legendre01;
    }
    return BasisKind::Legendre01;
}

bool support_compatible(const KernelSpec& spec, const BasisFamily& basis) {
    Support k = kernel_support(spec);
    if (k == Support::Any) return true;
    if (spec.dim() != basis.dim) return false;
    return k == basis.support();
}

namespace {

void check_coord(Support sup, double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("kernel: non-finite point");
    switch (sup) {
    case Support::UnitInterval:
        if (x < 0.0 || x > 1.0) throw std::invalid_argument("kernel: point outside [0,1]");
        break;
    case Support::HalfLine:
        if (x < 0.0) throw std::invalid_argument("kernel: point outside [0,inf)");
        break;
    case Support::Naturals:
        if (x < 0.0 || x != std::floor(x)) throw std::invalid_argument("kernel: point is not in N0");
        if (x > 60.0) throw std::invalid_argument("kernel: von Mises order beyond 60");
        break;
    default:
        break;
    }
}

double deh(double s, double t) {
    double d = s - t;
    double a = (d * d - 3.0) * (d * d - 3.0) - 6.0;
    double s2 = s * s, t2 = t * t;
    double b = -0.5 * s2 * t2 * (s2 - 5.0) * (t2 - 5.0) + 6.0 * (s2 + t2) - s2 * s2 - t2 * t2 - s2 * t2 -
               s * t * (s2 - 3.0) * (t2 - 3.0) - 3.0;
    return std::exp(-0.5 * d * d) * a + std::exp(-0.5 * (s2 + t2)) * b;
}

double von_mises(double tau, double s, double t) {
    int si = static_cast<int>(s), ti = static_cast<int>(t);
    double q1 = bessel_ratio(1.0, tau);
    double denom = 1.0 - q1 * q1 - q1 / tau;
    double qs = bessel_ratio(si, tau), qt = bessel_ratio(ti, tau);
    return bessel_ratio(std::abs(si - ti), tau) - qs * qt * (1.0 + s * t / (tau * q1)) -
           bessel_ratio_dtau(si, tau) * bessel_ratio_dtau(ti, tau) / denom;
}

double bhep(int d, std::span<const double> s, std::span<const double> t) {
    double diff2 = 0.0, ss = 0.0, tt = 0.0, st = 0.0;
    for (int i = 0; i < d; ++i) {
        diff2 += (s[i] - t[i]) * (s[i] - t[i]);
        ss += s[i] * s[i];
        tt += t[i] * t[i];
        st += s[i] * t[i];
    }
    return std::exp(-0.5 * diff2) - (1.0 + st + 0.5 * st * st) * std::exp(-0.5 * (ss + tt));
}

}  // namespace

double kernel_eval_unchecked(const KernelSpec& spec, double s, double t) {
    switch (spec.id) {
    case KernelId::CvM: return std::min(s, t) - s * t;
    case KernelId::HN2000: {
        double m = std::min(s, t);
        return s * t * m / 2.0 - m * m * m / 6.0 - s * s * t * t / 4.0;
    }
    case KernelId::EKS2021: {
        double u = 2.0 * std::max(s, t) - 1.0;
        return (1.0 - u * u * u) / 6.0 - s * t * (1.0 - s) * (1.0 - t);
    }
    case KernelId::BH_rho: {
        double fs = -std::expm1(-s), ft = -std::expm1(-t);
        return std::min(fs, ft) - fs * ft;
    }
    case KernelId::K0_exp: return std::exp(-std::max(s, t)) - std::exp(-(s + t));
    case KernelId::K2001:
        return (std::abs(s - t) + 2.0) * std::exp(-std::max(s, t)) - (s + t + s * t + 2.0) * std::exp(-(s + t));
    case KernelId::EbnerKZ:
        return (s * t + 1.0) * std::exp(-0.5 * (s - t) * (s - t)) - (2.0 * s * t + 1.0) * std::exp(-0.5 * (s * s + t * t));
    case KernelId::HJM_C: {
        double st = s * t;
        return std::exp(st) + 0.5 * (std::exp(st) + std::exp(-st)) + 2.0 * std::cos(st) - st - 4.0;
    }
    case KernelId::DEH_K: return deh(s, t);
    case KernelId::VonMises: return von_mises(spec.tau, s, t);
    case KernelId::BHEP: {
        double a[1] = {s}, b[1] = {t};
        return bhep(1, a, b);
    }
    case KernelId::Constant: return spec.value;
    }
    return 0.0;
}

double kernel_eval(const KernelSpec& spec, std::span<const double> s, std::span<const double> t) {
    spec.validate();
    int d = spec.dim();
    if (spec.id != KernelId::Constant && (static_cast<int>(s.size()) != d || static_cast<int>(t.size()) != d))
        throw std::invalid_argument("kernel: point dimension mismatch");
    Support sup = kernel_support(spec);
    for (double x : s) check_coord(sup, x);
    for (double x : t) check_coord(sup, x);
    if (spec.id == KernelId::BHEP) return bhep(d, s, t);
    if (spec.id == KernelId::Constant) return spec.value;
    return kernel_eval_unchecked(spec, s[0], t[0]);
}

double kernel_eval(const KernelSpec& spec, double s, double t) {
    double a[1] = {s}, b[1] = {t};
    return kernel_eval(spec, std::span<const double>(a, 1), std::span<const double>(b, 1));
}

std::string to_string(KernelId id) {
    switch (id) {
    case KernelId::CvM: return "cvm";
    case KernelId::HN2000: return "hn2000";
    case KernelId::EKS2021: return "eks2021";
    case KernelId::BH_rho: return "bh_rho";
    case KernelId::K0_exp: return "k0_exp";
    case KernelId::K2001: return "k2001";
    case KernelId::EbnerKZ: return "ebner_kz";
    case KernelId::HJM_C: return "hjm_c";
    case KernelId::DEH_K: return "deh_k";
    case KernelId::VonMises: return "vonmises";
    case KernelId::BHEP: return "bhep";
    case KernelId::Constant: return "constant";
    }
    return "?";
}

KernelId kernel_id_from_string(const std::string& name) {
    for (KernelId id : catalog())
        if (to_string(id) == name) return id;
    if (name == "constant") return KernelId::Constant;
    throw std::invalid_argument("unknown kernel '" + name + "'");
}

std::vector<KernelId> catalog() {
    return {KernelId::CvM,     KernelId::HN2000, KernelId::EKS2021, KernelId::BH_rho,
            KernelId::K0_exp,  KernelId::K2001,  KernelId::EbnerKZ, KernelId::HJM_C,
            KernelId::DEH_K,   KernelId::VonMises, KernelId::BHEP};
}

double bessel_i(double nu, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("bessel: argument must be positive");
    if (!(nu > -1.0)) throw std::invalid_argument("bessel: order must exceed -1");
    double lx = std::log(0.5 * x);
    double sum = 0.0;
    for (int m = 0; m < 10000; ++m) {
        double term = std::exp((2.0 * m + nu) * lx - std::lgamma(m + 1.0) - std::lgamma(m + nu + 1.0));
        sum += term;
        // terms decrease once m exceeds x/2
        if (m > 0.5 * x && term < 1e-17 * sum) return sum;
    }
    return sum;
}

double bessel_ratio(double s, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("bessel_ratio: tau must be positive");
    double nu = std::abs(s);
    if (nu > 60.0) throw std::invalid_argument("bessel_ratio: |s| beyond 60");
    if (nu == 0.0) return 1.0;
    return bessel_i(nu, tau) / bessel_i(0.0, tau);
}

double bessel_ratio_dorder(double s, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("bessel_ratio_dorder: tau must be positive");
    if (std::abs(s) > 60.0) throw std::invalid_argument("bessel_ratio_dorder: |s| beyond 60");
    constexpr double h = 1e-5;
    double i0 = bessel_i(0.0, tau);
    return (bessel_i(s + h, tau) - bessel_i(s - h, tau)) / (2.0 * h * i0);
}

double bessel_ratio_dtau(int s, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("bessel_ratio_dtau: tau must be positive");
    if (s < 0 || s > 59) throw std::invalid_argument("bessel_ratio_dtau: order outside 0..59");
    double i0 = bessel_i(0.0, tau);
    double lo = bessel_i(std::abs(s - 1), tau), hi = bessel_i(s + 1, tau);
    return (lo + hi) / (2.0 * i0) - bessel_ratio(s, tau) * bessel_ratio(1.0, tau);
}

double SeparableForm::eval(std::span<const double> s, std::span<const double> t) const {
    double total = 0.0;
    for (const auto& term : terms) {
        double p = term.coeff;
        for (int i = 0; i < dim; ++i) p *= term.factors[i](s[i], t[i]);
        total += p;
    }
    return total;
}

SeparableForm separable_form(const KernelSpec& spec) {
    spec.validate();
    SeparableForm form;
    form.dim = spec.dim();
    if (spec.id != KernelId::BHEP || spec.d == 1) {
        SeparableFactor f;
        f.kind = SeparableFactor::Kind::Bivariate;
        f.bivariate = [spec](double s, double t) { return kernel_eval_unchecked(spec, s, t); };
        form.terms.push_back({1.0, {f}});
        return form;
    }
    int d = spec.d;
    auto h = [](int a) {
        return std::function<double(double)>([a](double x) { return std::pow(x, a) * std::exp(-0.5 * x * x); });
    };
    auto product_term = [&](double coeff, const std::vector<int>& pw) {
        SeparableTerm term{coeff, {}};
        for (int k = 0; k < d; ++k) {
            SeparableFactor f;
            f.kind = SeparableFactor::Kind::Product;
            f.left = h(pw[k]);
            f.right = h(pw[k]);
            term.factors.push_back(f);
        }
        return term;
    };

    SeparableTerm a{1.0, {}};
    for (int k = 0; k < d; ++k) {
        SeparableFactor f;
        f.kind = SeparableFactor::Kind::Bivariate;
        f.bivariate = [](double s, double t) { return std::exp(-0.5 * (s - t) * (s - t)); };
        a.factors.push_back(f);
    }
    form.terms.push_back(a);
    form.terms.push_back(product_term(-1.0, std::vector<int>(d, 0)));
    for (int i = 0; i < d; ++i) {
        std::vector<int> pw(d, 0);
        pw[i] = 1;
        form.terms.push_back(product_term(-1.0, pw));
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            std::vector<int> pw(d, 0);
            pw[i] += 1;
            pw[j] += 1;
            form.terms.push_back(product_term(-0.5, pw));
        }
    return form;
}

}  // namespace spectrakit
