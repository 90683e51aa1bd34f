#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <queue>
#include <utility>
#include <vector>

namespace femtoloss {

template <typename Scalar>
struct QuadratureResult {
    Scalar value{};
    Scalar error_estimate{};
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

template <typename Scalar>
struct Segment {
    Scalar a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

// 15-point Kronrod extension of the 7-point Gauss rule on [a, b].
template <typename Scalar, typename F>
Segment<Scalar> kronrod15(F& f, Scalar a, Scalar b) {
    static constexpr double nodes[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0,
    };
    static constexpr double kronrod_weights[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    };
    static constexpr double gauss_weights[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    };

    const Scalar center = (a + b) / Scalar(2);
    const Scalar half = (b - a) / Scalar(2);
    const Scalar f_center = f(center);
    Scalar kronrod = f_center * Scalar(kronrod_weights[7]);
    Scalar gauss = f_center * Scalar(gauss_weights[3]);
    for (int j = 0; j < 7; ++j) {
        const Scalar dx = half * Scalar(nodes[j]);
        const Scalar sum = f(center - dx) + f(center + dx);
        kronrod += Scalar(kronrod_weights[j]) * sum;
        if (j % 2 == 1) {
            gauss += Scalar(gauss_weights[j / 2]) * sum;
        }
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7/K15) over the union of the
/// intervals delimited by `breakpoints` (sorted, at least two). The
/// worst segment is bisected until the summed error estimate is below
/// max(abs_tol, rel_tol * |value|).
template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate_adaptive(F&& f, const std::vector<Scalar>& breakpoints, Scalar rel_tol,
                                            Scalar abs_tol = Scalar(0), int max_segments = 4000) {
    std::priority_queue<detail::Segment<Scalar>> segments;
    QuadratureResult<Scalar> result;
    Scalar total = 0;
    Scalar total_error = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i + 1] > breakpoints[i])) {
            continue;
        }
        auto seg = detail::kronrod15<Scalar>(f, breakpoints[i], breakpoints[i + 1]);
        result.evaluations += 15;
        total += seg.value;
        total_error += seg.error;
        segments.push(seg);
    }

    auto tolerance = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };
    while (!segments.empty() && total_error > tolerance() && static_cast<int>(segments.size()) < max_segments) {
        const auto worst = segments.top();
        segments.pop();
        const Scalar mid = (worst.a + worst.b) / Scalar(2);
        if (!(mid > worst.a && mid < worst.b)) {
            segments.push(worst);
            break;  // interval exhausted at machine precision
        }
        auto left = detail::kronrod15<Scalar>(f, worst.a, mid);
        auto right = detail::kronrod15<Scalar>(f, mid, worst.b);
        result.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        segments.push(left);
        segments.push(right);
    }

    // Re-sum to shed the drift of the running updates.
    total = 0;
    total_error = 0;
    while (!segments.empty()) {
        total += segments.top().value;
        total_error += segments.top().error;
        segments.pop();
    }
    result.value = total;
    result.error_estimate = total_error;
    result.converged = std::isfinite(total) && total_error <= tolerance();
    return result;
}

template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate_adaptive(F&& f, Scalar a, Scalar b, Scalar rel_tol, Scalar abs_tol = Scalar(0),
                                            int max_segments = 4000) {
    return integrate_adaptive<Scalar>(std::forward<F>(f), std::vector<Scalar>{a, b}, rel_tol, abs_tol, max_segments);
}

}  // namespace femtoloss
