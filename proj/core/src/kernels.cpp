#include "kdvtbc/kernels.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "kdvtbc/errors.hpp"

namespace kdvtbc {

namespace {

const std::array<const char*, 12> kKernelNames = {
    "Y1R", "Y2R", "Y3R", "Y4R", "Y1C", "Y2C",
    "Y3C", "Y4C", "Y5C", "Y6C", "Y7C", "Y8C"};

const std::vector<KernelId> kRcnKernels = {KernelId::R1, KernelId::R2,
                                           KernelId::R3, KernelId::R4};
const std::vector<KernelId> kCcnKernels = {
    KernelId::C1, KernelId::C2, KernelId::C3, KernelId::C4,
    KernelId::C5, KernelId::C6, KernelId::C7, KernelId::C8};

// Kernel value from one continuity-ordered root row (inside roots first).
cplx kernel_from_row(KernelId id, const std::array<cplx, 4>& row) {
    switch (id) {
    case KernelId::R1: return row[1] + row[2];
    case KernelId::R2: return row[1] * row[2];
    case KernelId::R3: return row[0];
    case KernelId::R4: return row[0] * row[0];
    case KernelId::C1: return row[0] + row[1];
    case KernelId::C2: { const cplx s = row[0] + row[1]; return s * s; }
    case KernelId::C3: return row[0] * row[1];
    case KernelId::C4: { const cplx q = row[0] * row[1]; return q * q; }
    case KernelId::C5: return row[2] + row[3];
    case KernelId::C6: { const cplx s = row[2] + row[3]; return s * s; }
    case KernelId::C7: return row[2] * row[3];
    case KernelId::C8: { const cplx q = row[2] * row[3]; return q * q; }
    }
    throw InvalidSpec("kernel_from_row: bad kernel id");
}

struct CacheKey {
    std::int32_t scheme;
    std::int32_t pad = 0;
    double U1, U2, dx, dt, r;
    std::uint64_t Nz;
};

std::uint64_t fnv1a(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::filesystem::path cache_path(const std::string& dir, const CacheKey& key) {
    const std::uint64_t h = fnv1a(&key, sizeof(key));
    char name[64];
    std::snprintf(name, sizeof(name), "kdvtbc_%s_%016llx.kern",
                  key.scheme == 0 ? "rcn" : "ccn",
                  static_cast<unsigned long long>(h));
    return std::filesystem::path(dir) / name;
}

constexpr std::uint64_t kCacheMagic = 0x4b44564b30303031ull; // "KDVK0001"

bool load_cached(const std::string& dir, const CacheKey& key, KernelSet& out) {
    std::ifstream in(cache_path(dir, key), std::ios::binary);
    if (!in) return false;
    std::uint64_t magic = 0;
    CacheKey stored{};
    in.read(reinterpret_cast<char*>(&magic), sizeof(magic));
    in.read(reinterpret_cast<char*>(&stored), sizeof(stored));
    if (!in || magic != kCacheMagic ||
        std::memcmp(&stored, &key, sizeof(key)) != 0)
        return false;
    std::uint32_t count = 0;
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    for (std::uint32_t i = 0; i < count && in; ++i) {
        std::int32_t id = 0;
        std::uint64_t len = 0;
        in.read(reinterpret_cast<char*>(&id), sizeof(id));
        in.read(reinterpret_cast<char*>(&len), sizeof(len));
        if (!in || len > (1u << 26)) return false;
        CoefficientSequence plain, xi;
        plain.coeffs.resize(len);
        xi.coeffs.resize(len);
        in.read(reinterpret_cast<char*>(plain.coeffs.data()),
                std::streamsize(len * sizeof(double)));
        in.read(reinterpret_cast<char*>(xi.coeffs.data()),
                std::streamsize(len * sizeof(double)));
        plain.radius_used = xi.radius_used = key.r;
        plain.tag = kKernelNames[std::size_t(id)];
        xi.tag = plain.tag + "_xi";
        out.plain[KernelId(id)] = std::move(plain);
        out.xi[KernelId(id)] = std::move(xi);
    }
    return bool(in);
}

void store_cached(const std::string& dir, const CacheKey& key,
                  const KernelSet& set) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::ofstream outf(cache_path(dir, key), std::ios::binary);
    if (!outf) return; // cache is best effort
    outf.write(reinterpret_cast<const char*>(&kCacheMagic), sizeof(kCacheMagic));
    outf.write(reinterpret_cast<const char*>(&key), sizeof(key));
    const std::uint32_t count = std::uint32_t(set.plain.size());
    outf.write(reinterpret_cast<const char*>(&count), sizeof(count));
    for (const auto& [id, plain] : set.plain) {
        const auto& xi = set.xi.at(id);
        const std::int32_t idv = std::int32_t(id);
        const std::uint64_t len = plain.coeffs.size();
        outf.write(reinterpret_cast<const char*>(&idv), sizeof(idv));
        outf.write(reinterpret_cast<const char*>(&len), sizeof(len));
        outf.write(reinterpret_cast<const char*>(plain.coeffs.data()),
                   std::streamsize(len * sizeof(double)));
        outf.write(reinterpret_cast<const char*>(xi.coeffs.data()),
                   std::streamsize(len * sizeof(double)));
    }
}

} // namespace

const char* kernel_name(KernelId id) { return kKernelNames[std::size_t(id)]; }

KernelId kernel_from_name(const std::string& name) {
    for (std::size_t i = 0; i < kKernelNames.size(); ++i)
        if (name == kKernelNames[i]) return KernelId(i);
    throw InvalidSpec("unknown kernel '" + name + "'");
}

const std::vector<KernelId>& kernels_for(Scheme scheme) {
    return scheme == Scheme::RCN ? kRcnKernels : kCcnKernels;
}

const CoefficientSequence& KernelSet::plain_of(KernelId id) const {
    const auto it = plain.find(id);
    if (it == plain.end())
        throw InvalidSpec(std::string("kernel ") + kernel_name(id) +
                          " not present in this set");
    return it->second;
}

const CoefficientSequence& KernelSet::xi_of(KernelId id) const {
    const auto it = xi.find(id);
    if (it == xi.end())
        throw InvalidSpec(std::string("kernel ") + kernel_name(id) +
                          " not present in this set");
    return it->second;
}

std::size_t default_nz(int n_steps, double r) {
    // r^{-Nz} <= 1e-4 keeps the alias terms of the contour quadrature
    // small; the convolution itself needs coefficients up to N+2.
    const double alias_nodes = std::log(1e4) / std::log(r);
    std::size_t need = std::size_t(2 * (n_steps + 2));
    need = std::max(need, std::size_t(std::ceil(alias_nodes)));
    return std::min(next_power_of_two(need), std::size_t(1) << 22);
}

cplx kernel_zdomain(KernelId id, double mu, double a_coef, cplx z) {
    if (!(std::abs(z) > 1.0))
        throw InvalidSpec("kernel_zdomain: need |z| > 1");
    const bool rcn = id == KernelId::R1 || id == KernelId::R2 ||
                     id == KernelId::R3 || id == KernelId::R4;
    const cplx p = p_of_z(mu, z);
    std::array<cplx, 4> row{};
    int d = 0, n_inside = 0;
    if (rcn) {
        const auto c = solve_discrete_cubic(p);
        std::copy(c.begin(), c.end(), row.begin());
        d = 3;
        n_inside = 1;
    } else {
        row = solve_discrete_quartic(p, a_coef);
        d = 4;
        n_inside = 2;
    }
    // the kernels are symmetric in same-side roots, so classification
    // alone fixes their values
    std::sort(row.begin(), row.begin() + d,
              [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
    int inside = 0;
    for (int k = 0; k < d; ++k)
        if (std::abs(row[std::size_t(k)]) < 1.0) ++inside;
    if (inside != n_inside)
        throw SeparationViolation("kernel_zdomain: wrong inside/outside count");
    return kernel_from_row(id, row);
}

cplx kernel_zdomain(KernelId id, const ProblemSpec& spec, cplx z) {
    return kernel_zdomain(id, spec.mu(), spec.a_coef(), z);
}

KernelSet build_kernels(const ProblemSpec& spec, std::size_t Nz,
                        const std::string& cache_dir) {
    spec.validate();
    if (Nz == 0) Nz = default_nz(spec.N_steps, spec.r);
    if (!is_power_of_two(Nz))
        throw InvalidSpec("build_kernels: Nz must be a power of two");

    KernelSet set;
    set.scheme = spec.scheme;
    set.U1 = spec.U1;
    set.U2 = spec.U2;
    set.dx = spec.dx();
    set.dt = spec.dt();
    set.radius = spec.r;
    set.mu = spec.mu();
    set.a_coef = spec.a_coef();
    set.Nz = Nz;

    const CacheKey key{spec.scheme == Scheme::RCN ? 0 : 1, 0, set.U1, set.U2,
                       set.dx,  set.dt, set.radius, std::uint64_t(Nz)};
    if (!cache_dir.empty() && load_cached(cache_dir, key, set)) return set;

    const auto track = track_roots(spec.scheme, spec, Nz);
    const cplx one(1.0);
    for (KernelId id : kernels_for(spec.scheme)) {
        CircleSamples plain_s, xi_s;
        plain_s.radius = xi_s.radius = spec.r;
        plain_s.values.resize(Nz);
        xi_s.values.resize(Nz);
        for (std::size_t i = 0; i < Nz; ++i) {
            const cplx v = kernel_from_row(id, track.roots[i]);
            plain_s.values[i] = v;
            xi_s.values[i] = v * (one + 1.0 / track.z(i));
        }
        set.plain[id] = inverse_ztransform(plain_s, kernel_name(id));
        set.xi[id] =
            inverse_ztransform(xi_s, std::string(kernel_name(id)) + "_xi");
    }
    if (!cache_dir.empty()) store_cached(cache_dir, key, set);
    return set;
}

} // namespace kdvtbc
