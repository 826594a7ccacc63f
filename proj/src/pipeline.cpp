#include "qsvm/pipeline.hpp"

namespace qsvm {

Dataset load_source(const DatasetSource& src) {
    Dataset ds;
    switch (src.kind) {
        case DatasetSource::Kind::Xor: ds = gen_xor(src.xor_params, src.seed); break;
        case DatasetSource::Kind::Adhoc: ds = gen_adhoc_complex(src.adhoc_params, src.seed); break;
        case DatasetSource::Kind::Csv: ds = load_csv(src.path, src.classes); break;
    }
    if (!src.name.empty()) ds.name = src.name;
    return ds;
}

PreparedData prepare_data(const DatasetSource& src, const SplitConfig& split) {
    PreparedData out;
    out.full = load_source(src);
    if (src.balance) out.full = balance_classes(out.full, src.seed);

    const bool reduce = src.pca == PcaMode::On || (src.pca == PcaMode::Auto && out.full.dim() > 2);
    if (reduce) {
        const FeatureMatrix base = src.standardize ? standardize(out.full.X) : out.full.X;
        out.pca = fit_pca_2d(base);
        out.full.X = apply_pca(*out.pca, base);
    }

    out.split = train_test_split(out.full, split.test_frac, split.seed);
    out.train = out.full.subset(out.split.train);
    out.test = out.full.subset(out.split.test);
    if (src.scale) {
        auto scaled = scale_to_angle_range(out.train.X);
        out.test.X = scaled.scaler.apply(out.test.X);
        out.train.X = std::move(scaled.X);
        out.scaler = std::move(scaled.scaler);
    }
    return out;
}

}  // namespace qsvm
