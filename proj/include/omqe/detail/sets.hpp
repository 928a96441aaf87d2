#ifndef OMQE_DETAIL_SETS_HPP
#define OMQE_DETAIL_SETS_HPP

#include <algorithm>
#include <iterator>
#include <vector>

namespace omqe::sets {

template <class T>
void normalize(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

template <class T>
std::vector<T> unite(const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

template <class T>
bool subset(const std::vector<T>& a, const std::vector<T>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

template <class T>
bool contains(const std::vector<T>& a, const T& x) {
    return std::binary_search(a.begin(), a.end(), x);
}

}  // namespace omqe::sets

#endif
