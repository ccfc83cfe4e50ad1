#pragma once

#include <cmath>
#include <complex>

namespace cdroop {

// Two-dimensional vector in a rotating reference frame. The d/q components
// correspond to the real/imaginary parts of the associated complex phasor.
struct Vec2 {
    double d = 0.0;
    double q = 0.0;

    Vec2() = default;
    Vec2(double d_, double q_) : d(d_), q(q_) {}

    Vec2 operator+(const Vec2& o) const { return {d + o.d, q + o.q}; }
    Vec2 operator-(const Vec2& o) const { return {d - o.d, q - o.q}; }
    Vec2 operator*(double s) const { return {d * s, q * s}; }
    Vec2 operator-() const { return {-d, -q}; }
    Vec2& operator+=(const Vec2& o) {
        d += o.d;
        q += o.q;
        return *this;
    }

    double norm2() const { return d * d + q * q; }
    double norm() const { return std::hypot(d, q); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.d * b.d + a.q * b.q; }
// z-component of the planar cross product a x b.
inline double cross(const Vec2& a, const Vec2& b) { return a.d * b.q - a.q * b.d; }

inline std::complex<double> to_complex(const Vec2& v) { return {v.d, v.q}; }
inline Vec2 to_vec2(const std::complex<double>& c) { return {c.real(), c.imag()}; }

// General real 2x2 matrix. Multiplication by the embedding of a complex
// number a+jb uses the rotation-scaled form [[a, -b], [b, a]], so complex
// arithmetic and matrix arithmetic can be mixed freely.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    Mat2() = default;
    Mat2(double m11, double m12, double m21, double m22)
        : a11(m11), a12(m12), a21(m21), a22(m22) {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    // 90-degree rotation, the real embedding of the imaginary unit.
    static Mat2 j() { return {0.0, -1.0, 1.0, 0.0}; }
    // Embedding of the complex scalar c = a+jb as [[a, -b], [b, a]].
    static Mat2 embed(const std::complex<double>& c) {
        return {c.real(), -c.imag(), c.imag(), c.real()};
    }
    static Mat2 rotation(double angle) {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c, -s, s, c};
    }

    Vec2 operator*(const Vec2& v) const {
        return {a11 * v.d + a12 * v.q, a21 * v.d + a22 * v.q};
    }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }

    Mat2 inverse() const {
        const double dt = det();
        return {a22 / dt, -a12 / dt, -a21 / dt, a11 / dt};
    }

    // Spectral norm. For rotation-scaled matrices this equals the modulus of
    // the embedded complex number; computed generally via the singular values.
    double spectral_norm() const {
        // Largest singular value of a 2x2 matrix, closed form.
        const double f = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
        const double g = det();
        const double disc = std::sqrt(std::max(0.0, f * f - 4.0 * g * g));
        return std::sqrt(0.5 * (f + disc));
    }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

// Eigenvalues of a general real 2x2 matrix.
inline void eigenvalues_2x2(const Mat2& m, std::complex<double>& l1,
                            std::complex<double>& l2) {
    const double tr = m.trace();
    const double dt = m.det();
    const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4.0 * dt, 0.0));
    l1 = 0.5 * (tr + disc);
    l2 = 0.5 * (tr - disc);
}

}  // namespace cdroop
