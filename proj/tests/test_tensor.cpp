#include <gtest/gtest.h>

#include <cmath>

#include "pluvia/gradcheck.hpp"
#include "pluvia/tensor.hpp"

using namespace pluvia;

TEST(Tensor, ShapeAndData) {
    Tensor t({2, 3});
    EXPECT_EQ(t.numel(), 6u);
    EXPECT_EQ(t.rank(), 2u);
    for (std::size_t i = 0; i < t.numel(); ++i) EXPECT_EQ(t[i], 0.0);

    EXPECT_THROW(Tensor({2, 2}, {1.0, 2.0, 3.0}), DimensionError);
    EXPECT_THROW(Tensor({0, 2}), DimensionError);
}

TEST(Matmul, IdentityCase) {
    const Tensor a = tensor2d({{1, 2}, {3, 4}});
    const Tensor y = matmul(Tensor::identity(2), a);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(y[i], a[i]);
}

TEST(Matmul, HandArithmetic) {
    const Tensor a = tensor2d({{1, 2}});
    const Tensor b = tensor2d({{3}, {4}});
    const Tensor y = matmul(a, b);
    ASSERT_EQ(y.numel(), 1u);
    EXPECT_EQ(y[0], 11.0);
}

TEST(Matmul, ZeroCase) {
    Rng rng(3);
    Tensor b({4, 2});
    for (double& v : b.values()) v = rng.next_uniform(-5, 5);
    const Tensor y = matmul(Tensor::zeros({3, 4}), b);
    for (std::size_t i = 0; i < y.numel(); ++i) EXPECT_EQ(y[i], 0.0);
}

TEST(Matmul, ShapeMismatchNamesBothShapes) {
    try {
        matmul(Tensor({2, 3}), Tensor({4, 2}));
        FAIL() << "expected DimensionError";
    } catch (const DimensionError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("[2x3]"), std::string::npos);
        EXPECT_NE(msg.find("[4x2]"), std::string::npos);
    }
}

TEST(Matmul, AssociativityOnRandomChains) {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 1 + rng.next_index(5);
        const std::size_t k = 1 + rng.next_index(5);
        const std::size_t l = 1 + rng.next_index(5);
        const std::size_t n = 1 + rng.next_index(5);
        Tensor a({m, k}), b({k, l}), c({l, n});
        for (double& v : a.values()) v = rng.next_uniform(-1, 1);
        for (double& v : b.values()) v = rng.next_uniform(-1, 1);
        for (double& v : c.values()) v = rng.next_uniform(-1, 1);
        const Tensor left = matmul(matmul(a, b), c);
        const Tensor right = matmul(a, matmul(b, c));
        EXPECT_LT(max_rel_error(left, right), 1e-12);
    }
}

TEST(Matmul, BitReproducible) {
    Rng rng(7);
    Tensor a({6, 7}), b({7, 5});
    for (double& v : a.values()) v = rng.next_uniform(-2, 2);
    for (double& v : b.values()) v = rng.next_uniform(-2, 2);
    const Tensor y1 = matmul(a, b);
    const Tensor y2 = matmul(a, b);
    for (std::size_t i = 0; i < y1.numel(); ++i) EXPECT_EQ(y1[i], y2[i]);
}

TEST(Activation, SigmoidAtZero) {
    EXPECT_EQ(activate_scalar(0.0, Activation::sigmoid), 0.5);
}

TEST(Activation, ReluAtSignBoundaries) {
    const Tensor y = activation(tensor1d({-1, 0, 2}), Activation::relu);
    EXPECT_EQ(y[0], 0.0);
    EXPECT_EQ(y[1], 0.0);
    EXPECT_EQ(y[2], 2.0);
}

TEST(Activation, TanhReferenceValue) {
    // Reference evaluation of tanh(0.5) to 25 digits: 0.4621171572600097585...
    EXPECT_NEAR(activate_scalar(0.5, Activation::tanh), 0.46211715726000976, 1e-15);
}

TEST(Activation, DerivativesAtPreActivation) {
    EXPECT_EQ(activate_deriv_scalar(0.0, Activation::sigmoid), 0.25);
    EXPECT_EQ(activate_deriv_scalar(0.0, Activation::tanh), 1.0);
    EXPECT_EQ(activate_deriv_scalar(-1.0, Activation::relu), 0.0);
    EXPECT_EQ(activate_deriv_scalar(2.0, Activation::relu), 1.0);
    EXPECT_EQ(activate_deriv_scalar(123.0, Activation::linear), 1.0);
}

TEST(Glorot, BoundWithEqualFans) {
    // fan_in = fan_out = 3 gives limit sqrt(6/6) = 1.
    Rng rng(11);
    const Tensor t = glorot_uniform(rng, 3, 3, {3, 3});
    for (std::size_t i = 0; i < t.numel(); ++i) {
        EXPECT_GE(t[i], -1.0);
        EXPECT_LT(t[i], 1.0);
    }
}

TEST(Glorot, SameSeedSameTensor) {
    Rng a(123), b(123);
    const Tensor ta = glorot_uniform(a, 5, 7, {5, 7});
    const Tensor tb = glorot_uniform(b, 5, 7, {5, 7});
    for (std::size_t i = 0; i < ta.numel(); ++i) EXPECT_EQ(ta[i], tb[i]);
}

TEST(Glorot, ZeroFanRejected) {
    Rng rng(1);
    EXPECT_THROW(glorot_uniform(rng, 600, 0, {600, 1}), ParameterError);
    EXPECT_THROW(glorot_uniform(rng, 0, 600, {1, 600}), ParameterError);
}

TEST(Rng, DeterministicStream) {
    Rng a(2026), b(2026), c(2027);
    bool all_equal = true;
    bool any_diff_seed = false;
    for (int i = 0; i < 100; ++i) {
        const double va = a.next_u01();
        all_equal = all_equal && va == b.next_u01();
        any_diff_seed = any_diff_seed || va != c.next_u01();
        EXPECT_GE(va, 0.0);
        EXPECT_LT(va, 1.0);
    }
    EXPECT_TRUE(all_equal);
    EXPECT_TRUE(any_diff_seed);
}

TEST(FiniteDiff, SumOfSquares) {
    const auto f = [](const Tensor& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.numel(); ++i) s += x[i] * x[i];
        return s;
    };
    const Tensor g = finite_diff_grad(f, tensor1d({1, 2}), 1e-5);
    EXPECT_NEAR(g[0], 2.0, 1e-8);
    EXPECT_NEAR(g[1], 4.0, 1e-8);
}

TEST(FiniteDiff, ConstantFunction) {
    const Tensor g = finite_diff_grad([](const Tensor&) { return 3.5; }, tensor1d({1, 2, 3}), 1e-5);
    for (std::size_t i = 0; i < g.numel(); ++i) EXPECT_EQ(g[i], 0.0);
}

TEST(FiniteDiff, ProductRule) {
    const auto f = [](const Tensor& x) { return x[0] * x[1]; };
    const Tensor g = finite_diff_grad(f, tensor1d({3, 5}), 1e-5);
    EXPECT_NEAR(g[0], 5.0, 1e-8);
    EXPECT_NEAR(g[1], 3.0, 1e-8);
}

TEST(FiniteDiff, NonFiniteRejected) {
    const auto f = [](const Tensor& x) { return std::log(x[0]); };
    EXPECT_THROW(finite_diff_grad(f, tensor1d({0.0}), 1e-5), NumericError);
}
