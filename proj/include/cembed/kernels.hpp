#pragma once

#include <span>
#include <vector>

namespace cembed {

enum class KernelKind { Dirichlet, Fejer, ConjDirichlet, ConjFejer };

// D_p(ω) = sin(πω(2p+1))/sin(πω)
// K_p(ω) = [sin(πω(p+1))/sin(πω)]²
// D̃_p(ω) = (cos πω − cos(πω(2p+1)))/sin πω
// K̃_p(ω) = ((p+1) sin 2πω − sin(2πω(p+1)))/(2 sin² πω)
// Integer ω: D_p = 2p+1, K_p = (p+1)², D̃_p = K̃_p = 0.
double kernel_eval(KernelKind kind, int p, double omega);

// Same kernels at ω = k/N with exact integer argument reduction.
double kernel_eval_grid(KernelKind kind, long long p, long long k, long long N);

// (Δf)_k = f_k − f_{k+1}
std::vector<double> fdiff(std::span<const double> f);
// Δ²f_k = Δf_k − Δf_{k+1}
std::vector<double> fdiff2(std::span<const double> f);

}  // namespace cembed
