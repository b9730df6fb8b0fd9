#include "ersr/ellipse.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace ersr {
namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

double normalize_theta(double deg) {
    double t = std::fmod(deg, 180.0);
    if (t < 0) t += 180.0;
    return t == 180.0 ? 0.0 : t;
}

// Geometric parameters from general-conic coefficients
// A x^2 + B xy + C y^2 + D x + E y + F = 0. Returns nullopt unless the conic
// is a real ellipse.
std::optional<EllipseParams> conic_to_ellipse(double A, double B, double C, double D, double E,
                                              double F) {
    if (A + C < 0) {
        A = -A; B = -B; C = -C; D = -D; E = -E; F = -F;
    }
    const double den = 4.0 * A * C - B * B;
    if (!(den > 0)) return std::nullopt;

    const double cx = (B * E - 2.0 * C * D) / den;
    const double cy = (B * D - 2.0 * A * E) / den;
    const double fc = A * cx * cx + B * cx * cy + C * cy * cy + D * cx + E * cy + F;
    if (!(fc < 0)) return std::nullopt; // point or imaginary ellipse

    Eigen::Matrix2d q;
    q << A, B / 2.0, B / 2.0, C;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(q);
    if (es.info() != Eigen::Success) return std::nullopt;
    const auto lam = es.eigenvalues(); // ascending; both > 0 here
    if (!(lam(0) > 0)) return std::nullopt;

    const double semi_major = std::sqrt(-fc / lam(0));
    const double semi_minor = std::sqrt(-fc / lam(1));
    const Eigen::Vector2d vmaj = es.eigenvectors().col(0);

    EllipseParams e;
    e.center_a = cx;
    e.center_b = cy;
    e.axis_major = 2.0 * semi_major;
    e.axis_minor = 2.0 * semi_minor;
    e.theta_deg = normalize_theta(std::atan2(vmaj(1), vmaj(0)) * kDegPerRad);
    if (!std::isfinite(e.center_a) || !std::isfinite(e.center_b) || !std::isfinite(e.axis_major) ||
        !std::isfinite(e.axis_minor) || e.axis_minor <= 0)
        return std::nullopt;
    return e;
}

// Covariance (second-moment) ellipse of the points; the filled-region moment
// convention full-axis = 4*sqrt(eigenvalue).
std::optional<EllipseParams> moment_ellipse(const std::vector<std::array<double, 2>>& pts) {
    const double n = static_cast<double>(pts.size());
    double ma = 0, mb = 0;
    for (const auto& p : pts) {
        ma += p[0];
        mb += p[1];
    }
    ma /= n;
    mb /= n;
    double saa = 0, sab = 0, sbb = 0;
    for (const auto& p : pts) {
        const double da = p[0] - ma, db = p[1] - mb;
        saa += da * da;
        sab += da * db;
        sbb += db * db;
    }
    Eigen::Matrix2d cov;
    cov << saa / n, sab / n, sab / n, sbb / n;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    if (es.info() != Eigen::Success) return std::nullopt;
    const auto lam = es.eigenvalues();
    if (!(lam(0) > 1e-12)) return std::nullopt; // collinear
    EllipseParams e;
    e.center_a = ma;
    e.center_b = mb;
    e.axis_major = 4.0 * std::sqrt(lam(1));
    e.axis_minor = 4.0 * std::sqrt(lam(0));
    const Eigen::Vector2d vmaj = es.eigenvectors().col(1);
    e.theta_deg = normalize_theta(std::atan2(vmaj(1), vmaj(0)) * kDegPerRad);
    return e;
}

// Stabilized direct least-squares ellipse fit (block-decomposed constrained
// eigenproblem with constraint 4ac - b^2 = 1 on the quadratic part).
std::optional<EllipseParams> direct_fit(const std::vector<std::array<double, 2>>& pts) {
    const std::size_t n = pts.size();
    double amin = pts[0][0], amax = pts[0][0], bmin = pts[0][1], bmax = pts[0][1];
    double ma = 0, mb = 0;
    for (const auto& p : pts) {
        amin = std::min(amin, p[0]);
        amax = std::max(amax, p[0]);
        bmin = std::min(bmin, p[1]);
        bmax = std::max(bmax, p[1]);
        ma += p[0];
        mb += p[1];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    const double sa = std::max((amax - amin) / 2.0, 1e-9);
    const double sb = std::max((bmax - bmin) / 2.0, 1e-9);

    Eigen::MatrixXd d1(n, 3), d2(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (pts[i][0] - ma) / sa;
        const double y = (pts[i][1] - mb) / sb;
        d1(static_cast<Eigen::Index>(i), 0) = x * x;
        d1(static_cast<Eigen::Index>(i), 1) = x * y;
        d1(static_cast<Eigen::Index>(i), 2) = y * y;
        d2(static_cast<Eigen::Index>(i), 0) = x;
        d2(static_cast<Eigen::Index>(i), 1) = y;
        d2(static_cast<Eigen::Index>(i), 2) = 1.0;
    }
    const Eigen::Matrix3d s1 = d1.transpose() * d1;
    const Eigen::Matrix3d s2 = d1.transpose() * d2;
    const Eigen::Matrix3d s3 = d2.transpose() * d2;

    Eigen::FullPivLU<Eigen::Matrix3d> lu(s3);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::Matrix3d t = -lu.solve(s2.transpose());
    const Eigen::Matrix3d m = s1 + s2 * t;
    Eigen::Matrix3d mr;
    mr.row(0) = m.row(2) / 2.0;
    mr.row(1) = -m.row(1);
    mr.row(2) = m.row(0) / 2.0;

    Eigen::EigenSolver<Eigen::Matrix3d> es(mr);
    if (es.info() != Eigen::Success) return std::nullopt;

    Eigen::Vector3d a1;
    bool found = false;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(es.eigenvalues()(i).imag()) > 1e-9) continue;
        const Eigen::Vector3d v = es.eigenvectors().col(i).real();
        const double cond = 4.0 * v(0) * v(2) - v(1) * v(1);
        if (cond > 0) {
            a1 = v;
            found = true;
            break;
        }
    }
    if (!found) return std::nullopt;
    const Eigen::Vector3d a2 = t * a1;

    // denormalize the conic back to pixel coordinates
    const double A = a1(0) / (sa * sa);
    const double B = a1(1) / (sa * sb);
    const double C = a1(2) / (sb * sb);
    const double D = -2.0 * a1(0) * ma / (sa * sa) - a1(1) * mb / (sa * sb) + a2(0) / sa;
    const double E = -a1(1) * ma / (sa * sb) - 2.0 * a1(2) * mb / (sb * sb) + a2(1) / sb;
    const double F = a1(0) * ma * ma / (sa * sa) + a1(1) * ma * mb / (sa * sb) +
                     a1(2) * mb * mb / (sb * sb) - a2(0) * ma / sa - a2(1) * mb / sb + a2(2);
    return conic_to_ellipse(A, B, C, D, E, F);
}

} // namespace

ComponentLabeling label_components(const BinaryMask& m) {
    const int h = m.height, w = m.width;
    ComponentLabeling cl;
    cl.height = h;
    cl.width = w;
    cl.labels.assign(static_cast<std::size_t>(h) * w, 0);
    cl.sizes.push_back(0);

    int next = 1;
    std::queue<std::pair<int, int>> frontier;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!m.at(r, c) || cl.labels[static_cast<std::size_t>(r) * w + c] != 0) continue;
            const int label = next++;
            std::size_t count = 0;
            frontier.emplace(r, c);
            cl.labels[static_cast<std::size_t>(r) * w + c] = label;
            while (!frontier.empty()) {
                const auto [cr, cc] = frontier.front();
                frontier.pop();
                ++count;
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        const int nr = cr + dr, nc = cc + dc;
                        if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                        auto& slot = cl.labels[static_cast<std::size_t>(nr) * w + nc];
                        if (m.at(nr, nc) && slot == 0) {
                            slot = label;
                            frontier.emplace(nr, nc);
                        }
                    }
                }
            }
            cl.sizes.push_back(count);
        }
    }
    return cl;
}

BinaryMask largest_component(const BinaryMask& m) {
    const auto cl = label_components(m);
    if (cl.sizes.size() <= 1) throw EmptyMaskError("largest_component: mask has no foreground");
    // labels are assigned in row-major discovery order, so the first maximal
    // label is also the one with the smallest first (row, col) pixel
    std::size_t best = 1;
    for (std::size_t k = 2; k < cl.sizes.size(); ++k)
        if (cl.sizes[k] > cl.sizes[best]) best = k;
    BinaryMask out(m.height, m.width);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = cl.labels[i] == static_cast<int>(best) ? 1 : 0;
    return out;
}

std::vector<std::array<int, 2>> boundary_pixels(const BinaryMask& component) {
    const int h = component.height, w = component.width;
    std::vector<std::array<int, 2>> out;
    constexpr int dr[4] = {1, -1, 0, 0};
    constexpr int dc[4] = {0, 0, 1, -1};
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!component.at(r, c)) continue;
            for (int k = 0; k < 4; ++k) {
                const int nr = r + dr[k], nc = c + dc[k];
                if (nr < 0 || nr >= h || nc < 0 || nc >= w || !component.at(nr, nc)) {
                    out.push_back({c, r});
                    break;
                }
            }
        }
    }
    return out;
}

std::vector<std::array<double, 2>> boundary_samples(const BinaryMask& component) {
    const int h = component.height, w = component.width;
    std::vector<std::array<double, 2>> out;
    constexpr int dr[4] = {1, -1, 0, 0};
    constexpr int dc[4] = {0, 0, 1, -1};
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!component.at(r, c)) continue;
            for (int k = 0; k < 4; ++k) {
                const int nr = r + dr[k], nc = c + dc[k];
                if (nr < 0 || nr >= h || nc < 0 || nc >= w || !component.at(nr, nc))
                    out.push_back({c + dc[k] * 0.5, r + dr[k] * 0.5});
            }
        }
    }
    return out;
}

EllipseParams fit_ellipse(const BinaryMask& component) {
    if (boundary_pixels(component).size() < 5)
        throw FitDegenerateError("fit_ellipse: fewer than 5 boundary pixels");
    return fit_ellipse_points(boundary_samples(component));
}

EllipseParams fit_ellipse_points(const std::vector<std::array<double, 2>>& points) {
    if (points.size() < 5)
        throw FitDegenerateError("fit_ellipse: need at least 5 contour points, got " +
                                 std::to_string(points.size()));
    if (auto e = direct_fit(points)) return *e;
    if (auto e = moment_ellipse(points)) return *e;
    throw FitDegenerateError("fit_ellipse: degenerate point configuration");
}

std::array<double, 2> rotate_coords(double a, double b, const EllipseParams& e) {
    const double th = e.theta_deg * std::numbers::pi / 180.0;
    const double ct = std::cos(th), st = std::sin(th);
    const double da = a - e.center_a, db = b - e.center_b;
    return {da * ct + db * st, -da * st + db * ct};
}

double elliptical_distance(double a, double b, const EllipseParams& e) {
    const auto [ar, br] = rotate_coords(a, b, e);
    const double u = ar / e.semi_major();
    const double v = br / e.semi_minor();
    return u * u + v * v;
}

FloatGrid refine_pseudo_label(const FloatGrid& p_selected, const EllipseParams& e, double beta) {
    FloatGrid out(p_selected.height, p_selected.width);
    for (int r = 0; r < p_selected.height; ++r) {
        for (int c = 0; c < p_selected.width; ++c) {
            const double d = elliptical_distance(c, r, e);
            const double p = p_selected.at(r, c);
            double v;
            if (d <= 1.0) {
                const double lift = 1.0 - d;
                v = std::max(p, beta + lift * lift);
            } else {
                v = p * std::exp(-(d - 1.0));
            }
            out.at(r, c) = std::clamp(v, 0.0, 1.0);
        }
    }
    return out;
}

RefinementResult refine_map(const FloatGrid& p_selected, double tau, double beta) {
    RefinementResult res;
    try {
        const BinaryMask m = binarize(p_selected, tau);
        const BinaryMask mc = largest_component(m);
        const EllipseParams e = fit_ellipse(mc);
        res.refined = refine_pseudo_label(p_selected, e, beta);
        res.ellipse = e;
        return res;
    } catch (const EmptyMaskError& err) {
        res.skip_reason = err.what();
    } catch (const FitDegenerateError& err) {
        res.skip_reason = err.what();
    }
    res.refined = p_selected;
    res.skipped = true;
    return res;
}

} // namespace ersr
