use std::collections::{BTreeSet, VecDeque};
use std::fs;
use std::path::PathBuf;
use std::thread;
use std::time::{Duration, Instant};

use serde_json::Value;

use super::DictError;

const MAX_CONTINUATIONS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct CrawlConfig {
    /// MediaWiki API base, e.g. `https://en.wikipedia.org/w/api.php`.
    pub endpoint: String,
    pub sub_cats: usize,
    pub pages: usize,
    /// Page texts are cached as `<cache_dir>/<domain>/<pageid>.txt`.
    pub cache_dir: Option<PathBuf>,
    pub min_interval: Duration,
}

impl CrawlConfig {
    pub fn new(endpoint: &str) -> Self {
        CrawlConfig {
            endpoint: endpoint.to_string(),
            sub_cats: 500,
            pages: 20,
            cache_dir: None,
            min_interval: Duration::from_millis(200),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WikiPage {
    pub page_id: u64,
    pub title: String,
    pub text: String,
}

/// Breadth-first category crawler with one request in flight at a time.
pub struct WikiCrawler {
    agent: ureq::Agent,
    config: CrawlConfig,
    last_request: Option<Instant>,
}

impl WikiCrawler {
    pub fn new(config: CrawlConfig) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(60)))
            .user_agent("reqlint-crawler/0.1")
            .build()
            .into();
        WikiCrawler { agent, config, last_request: None }
    }

    fn query(&mut self, params: &[(&str, &str)]) -> Result<Value, DictError> {
        if let Some(last) = self.last_request {
            let wait = self.config.min_interval.saturating_sub(last.elapsed());
            if !wait.is_zero() {
                thread::sleep(wait);
            }
        }
        self.last_request = Some(Instant::now());
        let mut req = self
            .agent
            .get(&self.config.endpoint)
            .query("action", "query")
            .query("format", "json")
            .query("formatversion", "2");
        for (k, v) in params {
            req = req.query(*k, *v);
        }
        let mut resp = req.call().map_err(|e| DictError::Http(e.to_string()))?;
        let body = resp.body_mut().read_to_string().map_err(|e| DictError::Http(e.to_string()))?;
        let json: Value = serde_json::from_str(&body).map_err(|e| DictError::Http(format!("bad json: {e}")))?;
        if let Some(err) = json.get("error") {
            return Err(DictError::Http(format!("api error: {err}")));
        }
        Ok(json)
    }

    /// Follows `continue` tokens, collecting `query.<key>` arrays.
    fn query_all(&mut self, params: &[(&str, &str)], key: &str, limit: usize) -> Result<Vec<Value>, DictError> {
        let mut out = Vec::new();
        let mut cont: Vec<(String, String)> = Vec::new();
        for _ in 0..MAX_CONTINUATIONS {
            let mut p: Vec<(&str, &str)> = params.to_vec();
            p.extend(cont.iter().map(|(k, v)| (k.as_str(), v.as_str())));
            let json = self.query(&p)?;
            if let Some(items) = json.pointer(&format!("/query/{key}")).and_then(Value::as_array) {
                out.extend(items.iter().cloned());
            }
            if out.len() >= limit {
                break;
            }
            match json.get("continue").and_then(Value::as_object) {
                Some(c) => {
                    cont = c.iter().filter_map(|(k, v)| Some((k.clone(), v.as_str()?.to_string()))).collect();
                }
                None => break,
            }
        }
        Ok(out)
    }

    fn category_exists(&mut self, title: &str) -> Result<bool, DictError> {
        let json = self.query(&[("prop", "info"), ("titles", title)])?;
        let page = json.pointer("/query/pages/0");
        Ok(page.is_some_and(|p| p.get("missing").is_none() && p.get("invalid").is_none()))
    }

    fn subcategories(&mut self, title: &str, limit: usize) -> Result<Vec<String>, DictError> {
        let items = self.query_all(
            &[("list", "categorymembers"), ("cmtitle", title), ("cmtype", "subcat"), ("cmlimit", "500")],
            "categorymembers",
            limit,
        )?;
        Ok(items.iter().filter_map(|i| i.get("title")?.as_str().map(String::from)).collect())
    }

    /// Page ids of the category ordered by descending length.
    fn longest_pages(&mut self, title: &str, n: usize) -> Result<Vec<(u64, String)>, DictError> {
        let items = self.query_all(
            &[("generator", "categorymembers"), ("gcmtitle", title), ("gcmtype", "page"), ("gcmlimit", "500"), ("prop", "info")],
            "pages",
            usize::MAX,
        )?;
        let mut pages: Vec<(u64, u64, String)> = items
            .iter()
            .filter_map(|p| {
                Some((p.get("pageid")?.as_u64()?, p.get("length").and_then(Value::as_u64).unwrap_or(0), p.get("title")?.as_str()?.to_string()))
            })
            .collect();
        pages.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        Ok(pages.into_iter().take(n).map(|(id, _, t)| (id, t)).collect())
    }

    fn page_text(&mut self, domain: &str, page_id: u64) -> Result<String, DictError> {
        let cached = self.config.cache_dir.as_ref().map(|d| d.join(domain).join(format!("{page_id}.txt")));
        if let Some(path) = &cached {
            if path.is_file() {
                return Ok(fs::read_to_string(path)?);
            }
        }
        let id = page_id.to_string();
        let json = self.query(&[("prop", "extracts"), ("explaintext", "1"), ("pageids", &id)])?;
        let text = json
            .pointer("/query/pages/0/extract")
            .and_then(Value::as_str)
            .ok_or_else(|| DictError::Http(format!("page {page_id} has no extract")))?
            .to_string();
        if let Some(path) = cached {
            fs::create_dir_all(path.parent().expect("cache path has a parent"))?;
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, &text)?;
            fs::rename(tmp, path)?;
        }
        Ok(text)
    }

    /// Crawls up to `sub_cats` subcategories of `category` breadth-first and
    /// fetches the `pages` longest pages of each.
    ///
    /// Failed page fetches are logged and skipped.
    pub fn crawl_category(&mut self, domain: &str, category: &str) -> Result<Vec<WikiPage>, DictError> {
        let root = if category.starts_with("Category:") { category.to_string() } else { format!("Category:{category}") };
        if !self.category_exists(&root)? {
            return Err(DictError::CategoryNotFound(category.to_string()));
        }

        let mut seen: BTreeSet<String> = BTreeSet::from([root.clone()]);
        let mut queue = VecDeque::from([root]);
        let mut chosen = Vec::new();
        while let Some(cat) = queue.pop_front() {
            if chosen.len() >= self.config.sub_cats {
                break;
            }
            for sub in self.subcategories(&cat, self.config.sub_cats)? {
                if chosen.len() >= self.config.sub_cats {
                    break;
                }
                if seen.insert(sub.clone()) {
                    chosen.push(sub.clone());
                    queue.push_back(sub);
                }
            }
        }

        let mut fetched = BTreeSet::new();
        let mut out = Vec::new();
        for cat in &chosen {
            let pages = match self.longest_pages(cat, self.config.pages) {
                Ok(p) => p,
                Err(e) => {
                    log::warn!("skipping {cat}: {e}");
                    continue;
                }
            };
            for (id, title) in pages {
                if !fetched.insert(id) {
                    continue;
                }
                match self.page_text(domain, id) {
                    Ok(text) => out.push(WikiPage { page_id: id, title, text }),
                    Err(e) => log::warn!("skipping page {id} ({title}): {e}"),
                }
            }
        }
        Ok(out)
    }
}
