#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sprglab/rng.hpp"
#include "sprglab/zp.hpp"

using namespace sprglab;

TEST_CASE("sample_prime returns verified primes of the requested width") {
    Rng rng(7);
    for (uint32_t bits : {8u, 12u, 16u}) {
        PrimeModulus mod = sample_prime(bits, rng);
        CHECK(mod.bit_length() == bits);
        CHECK(mod.p() >= (uint64_t{1} << (bits - 1)));
        CHECK(mod.p() < (uint64_t{1} << bits));
        CHECK(oracle::trial_division_prime(mod.p()));
    }
    CHECK_THROWS_AS(sample_prime(2, rng), ParameterError);
    CHECK_THROWS_AS(sample_prime(63, rng), ParameterError);
}

TEST_CASE("is_prime_u64 agrees with trial division on small integers") {
    for (uint64_t n = 0; n < 2000; ++n) {
        CHECK(is_prime_u64(n) == oracle::trial_division_prime(n));
    }
}

TEST_CASE("field ops match 128-bit arithmetic") {
    Rng rng(11);
    PrimeModulus mod = sample_prime(31, rng);
    const uint64_t p = mod.p();
    for (int i = 0; i < 200; ++i) {
        uint64_t a = rng.field_element(p);
        uint64_t b = rng.field_element(p);
        CHECK(mod.add(a, b) == (a + b) % p);
        CHECK(mod.mul(a, b) == oracle::mulmod(a, b, p));
        CHECK(mod.sub(a, b) == (a + p - b) % p);
        CHECK(mod.add(a, mod.neg(a)) == 0);
    }
    CHECK(mod.reduce_signed(-1) == p - 1);
    CHECK(mod.reduce_signed(static_cast<int64_t>(p)) == 0);
}

TEST_CASE("tensor_power basics") {
    PrimeModulus mod = PrimeModulus::from_prime(251);

    SUBCASE("unit/zero pattern") {
        CHECK(tensor_power(mod, {1, 0}, 2) == FieldVec{1, 0, 0, 0});
    }
    SUBCASE("direct multiplication table mod 7 on a small prime") {
        // (2,3) tensor (2,3) = (4,6,6,9); entries mod 7 computed by hand.
        PrimeModulus seven = PrimeModulus::from_prime(131);
        FieldVec t = tensor_power(seven, {2, 3}, 2);
        CHECK(t == FieldVec{4, 6, 6, 9});
        // The classic mod-7 expectation (4,6,6,2) holds once entries wrap.
        FieldVec wrapped;
        for (uint64_t x : t) wrapped.push_back(x % 7);
        CHECK(wrapped == FieldVec{4, 6, 6, 2});
    }
    SUBCASE("k = 1 is the identity") {
        Rng rng(3);
        FieldVec v = random_vec(mod, 9, rng);
        CHECK(tensor_power(mod, v, 1) == v);
    }
    SUBCASE("dimension cap") {
        FieldVec v(256, 1);
        CHECK_THROWS_AS(tensor_power(mod, v, 4), ParameterTooLarge);
    }
}

TEST_CASE("tensor power dimensions and inner-product factorization") {
    Rng rng(21);
    PrimeModulus mod = sample_prime(31, rng);
    for (uint32_t k = 1; k <= 4; ++k) {
        FieldVec u = random_vec(mod, 5, rng);
        FieldVec v = random_vec(mod, 5, rng);
        FieldVec uk = tensor_power(mod, u, k);
        FieldVec vk = tensor_power(mod, v, k);
        size_t want = 1;
        for (uint32_t i = 0; i < k; ++i) want *= 5;
        CHECK(uk.size() == want);
        CHECK(inner_product(mod, uk, vk) == mod.pow(inner_product(mod, u, v), k));
    }
}

TEST_CASE("mat_mul matches the schoolbook oracle and is associative") {
    Rng rng(33);
    PrimeModulus mod = sample_prime(31, rng);
    for (int i = 0; i < 20; ++i) {
        FieldMat a = random_mat(mod, 3, 3, rng);
        FieldMat b = random_mat(mod, 3, 3, rng);
        FieldMat c = random_mat(mod, 3, 3, rng);
        CHECK(mat_mul(mod, a, b) == oracle::schoolbook_mat_mul(mod.p(), a, b));
        CHECK(mat_mul(mod, mat_mul(mod, a, b), c) == mat_mul(mod, a, mat_mul(mod, b, c)));
    }

    SUBCASE("identity") {
        FieldMat id(4, 4);
        for (size_t i = 0; i < 4; ++i) id.at(i, i) = 1;
        FieldMat m = random_mat(mod, 4, 4, rng);
        CHECK(mat_mul(mod, id, m) == m);
    }
    SUBCASE("1x1") {
        FieldMat a(1, 1), b(1, 1);
        a.at(0, 0) = mod.p() - 2;
        b.at(0, 0) = mod.p() - 3;
        CHECK(mat_mul(mod, a, b)(0, 0) == mod.mul(mod.p() - 2, mod.p() - 3));
    }
    SUBCASE("dimension mismatch") {
        FieldMat a(2, 3), b(2, 3);
        CHECK_THROWS_AS(mat_mul(mod, a, b), DimensionMismatch);
    }
}

TEST_CASE("parallel kernels agree with the serial references") {
    Rng rng(55);
    PrimeModulus mod = sample_prime(31, rng);

    FieldMat a = random_mat(mod, 64, 48, rng);
    FieldMat b = random_mat(mod, 48, 52, rng);
    CHECK(mat_mul(mod, a, b) == mat_mul_serial(mod, a, b));

    FieldVec v = random_vec(mod, 17, rng);
    CHECK(tensor_power(mod, v, 4) == tensor_power_serial(mod, v, 4));
}

TEST_CASE("vec_mat_mul equals row extraction from mat_mul") {
    Rng rng(77);
    PrimeModulus mod = sample_prime(16, rng);
    FieldVec v = random_vec(mod, 6, rng);
    FieldMat a = random_mat(mod, 6, 9, rng);
    FieldMat row = FieldMat::from_entries(1, 6, v);
    FieldMat prod = mat_mul(mod, row, a);
    FieldVec got = vec_mat_mul(mod, v, a);
    for (size_t j = 0; j < 9; ++j) CHECK(got[j] == prod(0, j));
}
