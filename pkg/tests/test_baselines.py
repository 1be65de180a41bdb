import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from dsgsum import baselines, corpus, dsg
from dsgsum.errors import FileFormatError, ValidationError


def _random_tables(rng, V, H):
    span = 0.5 / H
    return (
        rng.uniform(-span, span, size=(V, H)),
        rng.uniform(-span, span, size=(V, H)),
    )


def test_sg_softmax_prob_normalizes():
    rng = np.random.default_rng(0)
    in_vecs, ctx_vecs = _random_tables(rng, 6, 3)
    emb_in = baselines.DenseEmbedding("SG_input", in_vecs)
    emb_ctx = baselines.DenseEmbedding("SG_context", ctx_vecs)
    total = sum(baselines.sg_softmax_prob(emb_in, emb_ctx, 2, w) for w in range(6))
    assert total == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValidationError):
        baselines.sg_softmax_prob(emb_in, emb_ctx, 6, 0)


def test_sg_pair_log_prob_matches_plain_loop():
    rng = np.random.default_rng(3)
    in_vecs, ctx_vecs = _random_tables(rng, 5, 2)
    lp, _, _ = baselines.sg_pair_gradients(in_vecs, ctx_vecs, 1, 4)
    expected = oracles.sg_pair_objective_reference(in_vecs.tolist(), ctx_vecs.tolist(), 1, 4)
    assert lp == pytest.approx(expected, abs=1e-12)


def test_sg_pair_gradients_against_finite_differences():
    rng = np.random.default_rng(17)
    V, H = 4, 3
    in_vecs, ctx_vecs = _random_tables(rng, V, H)
    center, context = 2, 0
    _, grad_in, grad_ctx = baselines.sg_pair_gradients(in_vecs, ctx_vecs, center, context)
    eps = 1e-6
    for table, grad in ((in_vecs, grad_in), (ctx_vecs, grad_ctx)):
        for r in range(V):
            for c in range(H):
                bumped_up = (in_vecs.copy(), ctx_vecs.copy())
                bumped_dn = (in_vecs.copy(), ctx_vecs.copy())
                which = 0 if table is in_vecs else 1
                bumped_up[which][r, c] += eps
                bumped_dn[which][r, c] -= eps
                up, _, _ = baselines.sg_pair_gradients(*bumped_up, center, context)
                dn, _, _ = baselines.sg_pair_gradients(*bumped_dn, center, context)
                fd = (up - dn) / (2 * eps)
                assert grad[r, c] == pytest.approx(fd, rel=1e-5, abs=1e-8)
    # Only the center row of the input-table gradient is active.
    inactive = [r for r in range(V) if r != center]
    np.testing.assert_array_equal(grad_in[inactive], 0.0)


def test_train_sg_is_deterministic_and_improves(toy_doc, toy_vocab):
    emb1 = baselines.train_sg([toy_doc], toy_vocab, 4, 1, 3, 0.1, seed=8)
    emb2 = baselines.train_sg([toy_doc], toy_vocab, 4, 1, 3, 0.1, seed=8)
    np.testing.assert_array_equal(emb1.vectors, emb2.vectors)
    assert emb1.kind == "SG_input"
    assert emb1.vectors.shape == (3, 4)

    emb_in, emb_ctx = baselines.train_sg(
        [toy_doc], toy_vocab, 4, 1, 3, 0.1, seed=8, return_context=True
    )
    np.testing.assert_array_equal(emb_in.vectors, emb1.vectors)
    assert emb_ctx.kind == "SG_context"

    rng = np.random.default_rng(8)
    before_in = rng.uniform(-0.125, 0.125, size=(3, 4))
    before_ctx = rng.uniform(-0.125, 0.125, size=(3, 4))
    before = baselines.sg_corpus_log_prob(before_in, before_ctx, [toy_doc], 1)
    after = baselines.sg_corpus_log_prob(emb_in.vectors, emb_ctx.vectors, [toy_doc], 1)
    assert after > before


def test_train_sg_rejects_oversized_vocab(toy_doc):
    big = corpus.Vocabulary(
        tuple(f"w{i}" for i in range(baselines.MAX_EXACT_SOFTMAX_V + 1)),
        tuple([1] * (baselines.MAX_EXACT_SOFTMAX_V + 1)),
    )
    with pytest.raises(ValidationError, match="exact-softmax"):
        baselines.train_sg([toy_doc], big, 2, 1, 1, 0.1, seed=0)


def test_train_sg_skips_pairless_corpus(toy_vocab):
    doc = corpus.Document("d", (corpus.Sentence((0,), "a"),))
    with pytest.raises(ValidationError, match="no training pairs"):
        baselines.train_sg([doc], toy_vocab, 2, 1, 1, 0.1, seed=0)


def test_glove_weight_shape():
    assert baselines.glove_weight(100.0, 100.0, 0.75) == 1.0
    assert baselines.glove_weight(250.0, 100.0, 0.75) == 1.0
    assert baselines.glove_weight(25.0, 100.0, 0.5) == pytest.approx(0.5)
    xs = [1.0, 5.0, 50.0, 99.0]
    ws = [baselines.glove_weight(x, 100.0, 0.75) for x in xs]
    assert ws == sorted(ws)
    assert all(0 < w < 1 for w in ws)


def test_glove_term_value_matches_plain_loop():
    rng = np.random.default_rng(5)
    v_main = rng.normal(size=4)
    v_ctx = rng.normal(size=4)
    value, *_ = baselines.glove_term_gradient(v_main, v_ctx, 0.3, -0.2, 7.0, 100.0, 0.75)
    expected = oracles.glove_term_objective_reference(
        v_main.tolist(), v_ctx.tolist(), 0.3, -0.2, 7.0, 100.0, 0.75
    )
    assert value == pytest.approx(expected, abs=1e-12)
    with pytest.raises(ValidationError):
        baselines.glove_term_gradient(v_main, v_ctx, 0.0, 0.0, 0.0, 100.0, 0.75)


def test_glove_term_gradients_against_finite_differences():
    rng = np.random.default_rng(23)
    H = 3
    v_main = rng.normal(size=H)
    v_ctx = rng.normal(size=H)
    b_main, b_ctx, x = 0.4, -0.7, 12.0

    def value(vm, vc, bm, bc):
        out, *_ = baselines.glove_term_gradient(vm, vc, bm, bc, x, 100.0, 0.75)
        return out

    _, g_main, g_ctx, g_bmain, g_bctx = baselines.glove_term_gradient(
        v_main, v_ctx, b_main, b_ctx, x, 100.0, 0.75
    )
    eps = 1e-6
    for k in range(H):
        up, dn = v_main.copy(), v_main.copy()
        up[k] += eps
        dn[k] -= eps
        fd = (value(up, v_ctx, b_main, b_ctx) - value(dn, v_ctx, b_main, b_ctx)) / (2 * eps)
        assert g_main[k] == pytest.approx(fd, rel=1e-6, abs=1e-9)
        up, dn = v_ctx.copy(), v_ctx.copy()
        up[k] += eps
        dn[k] -= eps
        fd = (value(v_main, up, b_main, b_ctx) - value(v_main, dn, b_main, b_ctx)) / (2 * eps)
        assert g_ctx[k] == pytest.approx(fd, rel=1e-6, abs=1e-9)
    fd = (value(v_main, v_ctx, b_main + eps, b_ctx) - value(v_main, v_ctx, b_main - eps, b_ctx)) / (
        2 * eps
    )
    assert g_bmain == pytest.approx(fd, rel=1e-6)
    fd = (value(v_main, v_ctx, b_main, b_ctx + eps) - value(v_main, v_ctx, b_main, b_ctx - eps)) / (
        2 * eps
    )
    assert g_bctx == pytest.approx(fd, rel=1e-6)


def test_train_glove_reduces_objective_and_is_seeded(toy_table):
    config = baselines.GloveConfig(epochs=20, seed=4)
    emb1, trace = baselines.train_glove(toy_table, 3, config, return_trace=True)
    emb2 = baselines.train_glove(toy_table, 3, config)
    np.testing.assert_array_equal(emb1.vectors, emb2.vectors)
    np.testing.assert_array_equal(emb1.biases, emb2.biases)
    assert emb1.kind == "GloVe"
    assert len(trace) == 21  # start plus one value per epoch
    assert trace[-1] < trace[0]
    assert min(trace) >= 0.0


def test_train_glove_validation(toy_table):
    with pytest.raises(ValidationError):
        baselines.train_glove(toy_table, 3, baselines.GloveConfig(alpha=0.0))
    with pytest.raises(ValidationError):
        baselines.train_glove(toy_table, 0, baselines.GloveConfig())
    empty = corpus.CooccurrenceTable({}, 3, 1, "uniform", 0.0)
    with pytest.raises(ValidationError):
        baselines.train_glove(empty, 3, baselines.GloveConfig())


def test_glove_config_validate():
    baselines.GloveConfig().validate()
    for bad in (
        baselines.GloveConfig(x_max=0.0),
        baselines.GloveConfig(alpha=1.5),
        baselines.GloveConfig(learning_rate=0.0),
        baselines.GloveConfig(epochs=-1),
    ):
        with pytest.raises(ValidationError):
            bad.validate()


def test_mean_embedding_dense_and_aspect_sources(toy_table):
    vecs = np.array([[1.0, 0.0], [0.0, 1.0], [3.0, 3.0]])
    emb = baselines.DenseEmbedding("SG_input", vecs)
    np.testing.assert_allclose(baselines.mean_embedding(emb, [0, 1]), [0.5, 0.5])
    np.testing.assert_allclose(
        baselines.mean_embedding(emb, [0, corpus.OOV_ID, 1]), [0.5, 0.5]
    )
    np.testing.assert_array_equal(baselines.mean_embedding(emb, []), [0.0, 0.0])

    model, _ = dsg.train(toy_table, H=2, max_iters=10, rel_tol=1e-10, seed=1)
    mean = baselines.mean_embedding(model, [0, 2])
    expected = (model.dim_given_word[:, 0] + model.dim_given_word[:, 2]) / 2
    np.testing.assert_allclose(mean, expected, atol=1e-15)


@given(st.lists(st.floats(-5, 5), min_size=2, max_size=6))
@settings(max_examples=50)
def test_cosine_bounds(values):
    u = np.asarray(values)
    v = u[::-1].copy()
    c = baselines.cosine(u, v)
    assert -1.0 <= c <= 1.0
    if np.any(u != 0):
        assert baselines.cosine(u, u) == pytest.approx(1.0)
        assert baselines.cosine(u, -u) == pytest.approx(-1.0)
    assert baselines.cosine(u, np.zeros_like(u)) == 0.0


def test_cosine_orthogonal():
    assert baselines.cosine(np.array([1.0, 0.0]), np.array([0.0, 2.0])) == pytest.approx(0.0)


def test_embedding_file_roundtrip(tmp_path, toy_table):
    words = ["a", "b", "c"]
    config = baselines.GloveConfig(epochs=3, seed=1)
    emb = baselines.train_glove(toy_table, 2, config)
    path = tmp_path / "g.emb"
    baselines.save_embedding(emb, words, path)
    loaded, loaded_words = baselines.load_embedding(path)
    assert loaded_words == words
    assert loaded.kind == "GloVe"
    np.testing.assert_array_equal(loaded.vectors, emb.vectors)
    np.testing.assert_array_equal(loaded.biases, emb.biases)

    plain = baselines.DenseEmbedding("SG_input", emb.vectors)
    baselines.save_embedding(plain, words, path)
    loaded, _ = baselines.load_embedding(path)
    assert loaded.biases is None
    np.testing.assert_array_equal(loaded.vectors, plain.vectors)


def test_load_embedding_rejects_malformed(tmp_path):
    path = tmp_path / "e.emb"
    path.write_text("EMB SG_input 2 2\na 0.0 1.0\n")
    with pytest.raises(FileFormatError):
        baselines.load_embedding(path)  # fewer rows than the header claims
    path.write_text("EMB Word2Vec 1 2\na 0.0 1.0\n")
    with pytest.raises(FileFormatError):
        baselines.load_embedding(path)
    path.write_text("EMB SG_input 1 2 BIAS\na 0.0 1.0\n")
    with pytest.raises(FileFormatError):
        baselines.load_embedding(path)  # BIAS header but no bias column


def test_save_embedding_word_count_mismatch(tmp_path):
    emb = baselines.DenseEmbedding("SG_input", np.zeros((3, 2)))
    with pytest.raises(ValidationError):
        baselines.save_embedding(emb, ["a", "b"], tmp_path / "e.emb")
