//! Mutable working representation shared by the balancing algorithms: per cluster, one id
//! list per present color. Lists are kept in descending id order (sorted lazily), so the
//! lowest ids of a color can be split off the tail. The bucket of every placed point is
//! also tracked, so only moved points cost anything when converting back.

use crate::fairness::{ColorAssignment, ColorId};
use crate::partition::Clustering;

#[derive(Debug, Clone, PartialEq, Eq)]
struct ColorList {
    color: u32,
    ids: Vec<u32>,
    sorted: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Bucket {
    lists: Vec<ColorList>,
    size: usize,
}

impl Bucket {
    fn find(&self, color: u32) -> Result<usize, usize> {
        self.lists.binary_search_by_key(&color, |l| l.color)
    }

    fn list_mut(&mut self, color: u32) -> &mut ColorList {
        let at = match self.find(color) {
            Ok(at) => at,
            Err(at) => {
                self.lists.insert(at, ColorList { color, ids: Vec::new(), sorted: true });
                at
            }
        };
        &mut self.lists[at]
    }
}

pub(crate) struct Buckets<'a> {
    colors: &'a ColorAssignment,
    buckets: Vec<Bucket>,
    // stale for points cut and not yet re-inserted
    label: Vec<u32>,
}

impl<'a> Buckets<'a> {
    pub fn new(c: &Clustering, colors: &'a ColorAssignment) -> Self {
        let table = c.n_clusters().saturating_mul(colors.k());
        let buckets =
            if table <= c.n_points().max(1 << 16) { group_by_table(c, colors) } else { group_by_sort(c, colors) };
        Buckets { colors, buckets, label: c.labels().to_vec() }
    }

    pub fn len(&self) -> usize {
        self.buckets.len()
    }

    pub fn size(&self, b: usize) -> usize {
        self.buckets[b].size
    }

    pub fn count(&self, b: usize, color: ColorId) -> usize {
        let bucket = &self.buckets[b];
        match bucket.find(color as u32) {
            Ok(at) => bucket.lists[at].ids.len(),
            Err(_) => 0,
        }
    }

    /// Removes the `m` lowest ids of `color` from bucket `b`.
    pub fn take_lowest(&mut self, b: usize, color: ColorId, m: usize) -> Vec<u32> {
        if m == 0 {
            return Vec::new();
        }
        let bucket = &mut self.buckets[b];
        let list = bucket.list_mut(color as u32);
        assert!(m <= list.ids.len(), "cannot take {m} points of color {color} from bucket {b}");
        if !list.sorted {
            list.ids.sort_unstable_by(|x, y| y.cmp(x));
            list.sorted = true;
        }
        let at = list.ids.len() - m;
        let taken = list.ids.split_off(at);
        bucket.size -= m;
        taken
    }

    pub fn insert(&mut self, b: usize, color: ColorId, ids: &[u32]) {
        if ids.is_empty() {
            return;
        }
        let bucket = &mut self.buckets[b];
        let list = bucket.list_mut(color as u32);
        list.ids.extend_from_slice(ids);
        list.sorted = false;
        bucket.size += ids.len();
        for &v in ids {
            self.label[v as usize] = b as u32;
        }
    }

    /// Appends a new bucket holding `ids`; their colors are looked up.
    pub fn push_points(&mut self, ids: &[u32]) -> usize {
        let mut bucket = Bucket::default();
        let b = self.buckets.len() as u32;
        for &v in ids {
            bucket.list_mut(self.colors.colors()[v as usize]).ids.push(v);
            bucket.size += 1;
            self.label[v as usize] = b;
        }
        for list in &mut bucket.lists {
            list.sorted = false;
        }
        self.buckets.push(bucket);
        self.buckets.len() - 1
    }

    pub fn push_empty(&mut self) -> usize {
        self.buckets.push(Bucket::default());
        self.buckets.len() - 1
    }

    /// Drops empty buckets and orders the rest by smallest member, matching the cluster
    /// order of [`Buckets::to_clustering`].
    pub fn canonicalize(&mut self) {
        let min_id = |b: &Bucket| b.lists.iter().flat_map(|l| l.ids.iter().copied()).min();
        let mut keyed: Vec<(u32, usize)> =
            self.buckets.iter().enumerate().filter_map(|(i, b)| min_id(b).map(|m| (m, i))).collect();
        keyed.sort_unstable();
        let mut remap = vec![u32::MAX; self.buckets.len()];
        let mut old: Vec<Option<Bucket>> = self.buckets.drain(..).map(Some).collect();
        for (new, &(_, i)) in keyed.iter().enumerate() {
            remap[i] = new as u32;
            self.buckets.push(old[i].take().unwrap());
        }
        for l in &mut self.label {
            *l = remap[*l as usize];
        }
    }

    /// Every point must be placed.
    pub fn to_clustering(&self) -> Clustering {
        Clustering::from_dense_labels(self.label.clone(), self.buckets.len())
    }

    pub fn into_clustering(self) -> Clustering {
        let n_buckets = self.buckets.len();
        Clustering::from_dense_labels(self.label, n_buckets)
    }
}

/// Grouping through a dense (bucket, color) table; two sequential passes over the points.
fn group_by_table(c: &Clustering, colors: &ColorAssignment) -> Vec<Bucket> {
    let k = colors.k();
    let key = |l: u32, color: u32| l as usize * k + color as usize;
    let mut count = vec![0u32; c.n_clusters() * k];
    for (&l, &color) in c.labels().iter().zip(colors.colors()) {
        count[key(l, color)] += 1;
    }
    let mut slot = vec![u32::MAX; count.len()];
    let mut buckets: Vec<Bucket> = c
        .sizes()
        .iter()
        .enumerate()
        .map(|(b, &size)| {
            let row = &count[b * k..(b + 1) * k];
            let lists = row
                .iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .enumerate()
                .map(|(i, (color, &m))| {
                    slot[b * k + color] = i as u32;
                    ColorList { color: color as u32, ids: Vec::with_capacity(m as usize), sorted: true }
                })
                .collect();
            Bucket { lists, size: size as usize }
        })
        .collect();
    // reverse scan yields descending ids
    for (p, (&l, &color)) in c.labels().iter().zip(colors.colors()).enumerate().rev() {
        buckets[l as usize].lists[slot[key(l, color)] as usize].ids.push(p as u32);
    }
    buckets
}

/// Grouping by a counting sort on buckets, for when the dense table would be too large.
fn group_by_sort(c: &Clustering, colors: &ColorAssignment) -> Vec<Bucket> {
    let n_buckets = c.n_clusters();
    let mut start = vec![0usize; n_buckets + 1];
    for &l in c.labels() {
        start[l as usize + 1] += 1;
    }
    for b in 0..n_buckets {
        start[b + 1] += start[b];
    }
    let mut order = vec![(0u32, 0u32); c.n_points()];
    let mut fill = start.clone();
    for (p, (&l, &color)) in c.labels().iter().zip(colors.colors()).enumerate() {
        order[fill[l as usize]] = (p as u32, color);
        fill[l as usize] += 1;
    }
    let mut count = vec![0usize; colors.k()];
    let mut touched: Vec<u32> = Vec::new();
    let mut buckets = Vec::with_capacity(n_buckets);
    for b in 0..n_buckets {
        let members = &order[start[b]..start[b + 1]];
        for &(_, color) in members {
            if count[color as usize] == 0 {
                touched.push(color);
            }
            count[color as usize] += 1;
        }
        touched.sort_unstable();
        let mut lists: Vec<ColorList> = touched
            .iter()
            .map(|&color| ColorList { color, ids: Vec::with_capacity(count[color as usize]), sorted: true })
            .collect();
        for &(p, color) in members.iter().rev() {
            let at = touched.binary_search(&color).expect("color counted above");
            lists[at].ids.push(p);
        }
        for &color in &touched {
            count[color as usize] = 0;
        }
        touched.clear();
        buckets.push(Bucket { lists, size: members.len() });
    }
    buckets
}
