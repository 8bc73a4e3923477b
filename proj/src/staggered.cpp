#include "tpm/staggered.hpp"

#include <cstdio>
#include <stdexcept>

#include "tpm/errors.hpp"

namespace tpm {

std::vector<double> divergence(const StaggeredField2D& f) {
    const int n = f.n;
    const double ih = n; // 1/h
    std::vector<double> div(static_cast<size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            div[f.idx(i, j)] = (f.u[f.idx(i + 1, j)] - f.u[f.idx(i, j)]) * ih +
                               (f.v[f.idx(i, j + 1)] - f.v[f.idx(i, j)]) * ih;
    return div;
}

std::vector<double> divergence(const StaggeredField3D& f) {
    const int n = f.n, nz = f.nz;
    const double ih = n, ihz = nz;
    std::vector<double> div(static_cast<size_t>(n) * n * nz, 0.0);
    for (int k = 0; k < nz; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                // u,v at the slab's two bounding z-levels, averaged
                const double dudx = 0.5 * ((f.u[f.vidx(i + 1, j, k)] + f.u[f.vidx(i + 1, j, k + 1)]) -
                                           (f.u[f.vidx(i, j, k)] + f.u[f.vidx(i, j, k + 1)])) * ih;
                const double dvdy = 0.5 * ((f.v[f.vidx(i, j + 1, k)] + f.v[f.vidx(i, j + 1, k + 1)]) -
                                           (f.v[f.vidx(i, j, k)] + f.v[f.vidx(i, j, k + 1)])) * ih;
                const double dwdz = (f.w[f.vidx(i, j, k + 1)] - f.w[f.vidx(i, j, k)]) * ihz;
                div[f.pidx(i, j, k)] = dudx + dvdy + dwdz;
            }
        }
    }
    return div;
}

StaggeredField2D gradient(const std::vector<double>& p, int n) {
    StaggeredField2D g(n);
    const double ih = n;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            g.u[g.idx(i, j)] = (p[g.idx(i, j)] - p[g.idx(i - 1, j)]) * ih;
            g.v[g.idx(i, j)] = (p[g.idx(i, j)] - p[g.idx(i, j - 1)]) * ih;
        }
    }
    return g;
}

StaggeredField3D gradient(const std::vector<double>& p, int n, int nz) {
    StaggeredField3D g(n, nz);
    const double ih = n, ihz = nz;
    for (int k = 1; k < nz; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                g.u[g.vidx(i, j, k)] = 0.5 * ((p[g.pidx(i, j, k - 1)] - p[g.pidx(i - 1, j, k - 1)]) +
                                              (p[g.pidx(i, j, k)] - p[g.pidx(i - 1, j, k)])) * ih;
                g.v[g.vidx(i, j, k)] = 0.5 * ((p[g.pidx(i, j, k - 1)] - p[g.pidx(i, j - 1, k - 1)]) +
                                              (p[g.pidx(i, j, k)] - p[g.pidx(i, j - 1, k)])) * ih;
                g.w[g.vidx(i, j, k)] = (p[g.pidx(i, j, k)] - p[g.pidx(i, j, k - 1)]) * ihz;
            }
        }
    }
    return g;
}

StaggeredField2D laplacian(const StaggeredField2D& f) {
    const int n = f.n;
    const double ih2 = static_cast<double>(n) * n;
    StaggeredField2D out(n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            out.u[f.idx(i, j)] = (f.u[f.idx(i + 1, j)] + f.u[f.idx(i - 1, j)] +
                                  f.u[f.idx(i, j + 1)] + f.u[f.idx(i, j - 1)] -
                                  4.0 * f.u[f.idx(i, j)]) * ih2;
            out.v[f.idx(i, j)] = (f.v[f.idx(i + 1, j)] + f.v[f.idx(i - 1, j)] +
                                  f.v[f.idx(i, j + 1)] + f.v[f.idx(i, j - 1)] -
                                  4.0 * f.v[f.idx(i, j)]) * ih2;
        }
    }
    return out;
}

StaggeredField3D laplacian(const StaggeredField3D& f) {
    const int n = f.n, nz = f.nz;
    const double ih2 = static_cast<double>(n) * n;
    const double ihz2 = static_cast<double>(nz) * nz;
    StaggeredField3D out(n, nz);
    auto lap = [&](const std::vector<double>& a, std::vector<double>& o) {
        for (int k = 1; k < nz; ++k) {
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < n; ++i) {
                    const size_t c = f.vidx(i, j, k);
                    o[c] = (a[f.vidx(i + 1, j, k)] + a[f.vidx(i - 1, j, k)] +
                            a[f.vidx(i, j + 1, k)] + a[f.vidx(i, j - 1, k)] - 4.0 * a[c]) * ih2 +
                           (a[f.vidx(i, j, k + 1)] + a[f.vidx(i, j, k - 1)] - 2.0 * a[c]) * ihz2;
                }
            }
        }
    };
    lap(f.u, out.u);
    lap(f.v, out.v);
    lap(f.w, out.w);
    return out;
}

std::vector<double> scalar_laplacian(const std::vector<double>& p, int n) {
    StaggeredField2D g = gradient(p, n);
    return divergence(g);
}

void apply_mask(StaggeredField2D& f, const SolidMask& mask) {
    if (mask.n != f.n) throw std::invalid_argument("apply_mask: size mismatch");
    for (int j = 0; j < f.n; ++j) {
        for (int i = 0; i < f.n; ++i) {
            if (mask.uface_solid(i, j)) f.u[f.idx(i, j)] = 0.0;
            if (mask.vface_solid(i, j)) f.v[f.idx(i, j)] = 0.0;
        }
    }
}

void apply_mask(StaggeredField3D& f, const SolidMask& mask) {
    if (mask.n != f.n) throw std::invalid_argument("apply_mask: size mismatch");
    for (int k = 0; k <= f.nz; ++k) {
        const bool wall = (k == 0 || k == f.nz);
        for (int j = 0; j < f.n; ++j) {
            for (int i = 0; i < f.n; ++i) {
                const size_t c = f.vidx(i, j, k);
                if (wall || mask.uface_solid(i, j)) f.u[c] = 0.0;
                if (wall || mask.vface_solid(i, j)) f.v[c] = 0.0;
                if (wall || mask.cell_solid(i, j)) f.w[c] = 0.0;
            }
        }
    }
}

namespace {

struct CsvFile {
    std::FILE* fp;
    explicit CsvFile(const std::string& path) : fp(std::fopen(path.c_str(), "w")) {
        if (!fp) throw std::runtime_error("cannot open for writing: " + path);
    }
    ~CsvFile() {
        if (fp) std::fclose(fp);
    }
};

} // namespace

void dump_csv(const StaggeredField2D& f, const std::string& component, const std::string& path) {
    const double h = f.h();
    CsvFile out(path);
    std::fprintf(out.fp, "i,j,x,y,value\n");
    const std::vector<double>* a = nullptr;
    double ox = 0.0, oy = 0.0; // DOF offsets in units of h
    if (component == "u") {
        a = &f.u;
        oy = 0.5;
    } else if (component == "v") {
        a = &f.v;
        ox = 0.5;
    } else if (component == "p") {
        a = &f.p;
        ox = oy = 0.5;
    } else {
        throw std::invalid_argument("dump_csv: unknown component " + component);
    }
    for (int j = 0; j < f.n; ++j)
        for (int i = 0; i < f.n; ++i)
            std::fprintf(out.fp, "%d,%d,%.17g,%.17g,%.17g\n", i, j,
                         -0.5 + (i + ox) * h, -0.5 + (j + oy) * h, (*a)[f.idx(i, j)]);
}

void dump_csv(const StaggeredField3D& f, const std::string& component, const std::string& path) {
    const double h = f.h(), hz = f.hz();
    CsvFile out(path);
    std::fprintf(out.fp, "i,j,k,x,y,z,value\n");
    const std::vector<double>* a = nullptr;
    double ox = 0.0, oy = 0.0, oz = 0.0;
    int kmax = f.nz;
    if (component == "u") {
        a = &f.u;
        oy = 0.5;
    } else if (component == "v") {
        a = &f.v;
        ox = 0.5;
    } else if (component == "w") {
        a = &f.w;
        ox = oy = 0.5;
    } else if (component == "p") {
        a = &f.p;
        ox = oy = 0.5;
        oz = 0.5;
        kmax = f.nz - 1;
    } else {
        throw std::invalid_argument("dump_csv: unknown component " + component);
    }
    for (int k = 0; k <= kmax; ++k)
        for (int j = 0; j < f.n; ++j)
            for (int i = 0; i < f.n; ++i)
                std::fprintf(out.fp, "%d,%d,%d,%.17g,%.17g,%.17g,%.17g\n", i, j, k,
                             -0.5 + (i + ox) * h, -0.5 + (j + oy) * h, (k + oz) * hz,
                             (*a)[f.vidx(i, j, k)]);
}

} // namespace tpm
