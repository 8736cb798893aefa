//! Minimal robots.txt evaluation: agent-group selection, longest-path-match
//! allow/disallow, and crawl-delay. Enough for a crawler that only requests
//! the root page and a handful of same-domain scripts.

#[derive(Debug, Clone, Default)]
pub struct RobotsPolicy {
    rules: Vec<Rule>,
    pub crawl_delay: Option<f64>,
}

#[derive(Debug, Clone)]
struct Rule {
    allow: bool,
    path: String,
}

impl RobotsPolicy {
    /// Policy that permits everything (used when robots.txt is absent).
    pub fn allow_all() -> Self {
        Self::default()
    }

    /// Parses robots.txt and keeps the rule group that matches
    /// `user_agent_token` best: longest agent substring wins, `*` is the
    /// fallback.
    pub fn parse(text: &str, user_agent_token: &str) -> Self {
        let token = user_agent_token.to_ascii_lowercase();

        #[derive(Default)]
        struct Group {
            agents: Vec<String>,
            rules: Vec<Rule>,
            crawl_delay: Option<f64>,
        }

        let mut groups: Vec<Group> = Vec::new();
        let mut current: Option<Group> = None;
        let mut in_agent_run = false;

        for raw_line in text.lines() {
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((field, value)) = line.split_once(':') else { continue };
            let field = field.trim().to_ascii_lowercase();
            let value = value.trim();
            match field.as_str() {
                "user-agent" => {
                    if !in_agent_run {
                        if let Some(g) = current.take() {
                            groups.push(g);
                        }
                        current = Some(Group::default());
                        in_agent_run = true;
                    }
                    if let Some(g) = current.as_mut() {
                        g.agents.push(value.to_ascii_lowercase());
                    }
                }
                "allow" | "disallow" => {
                    in_agent_run = false;
                    if let Some(g) = current.as_mut() {
                        if !value.is_empty() || field == "disallow" {
                            g.rules.push(Rule { allow: field == "allow", path: value.to_string() });
                        }
                    }
                }
                "crawl-delay" => {
                    in_agent_run = false;
                    if let Some(g) = current.as_mut() {
                        g.crawl_delay = value.parse::<f64>().ok().filter(|d| *d >= 0.0);
                    }
                }
                _ => {
                    in_agent_run = false;
                }
            }
        }
        if let Some(g) = current.take() {
            groups.push(g);
        }

        // Pick the group whose agent matches our token most specifically.
        let mut best: Option<(usize, &Group)> = None;
        let mut star: Option<&Group> = None;
        for g in &groups {
            for agent in &g.agents {
                if agent == "*" {
                    star.get_or_insert(g);
                } else if token.contains(agent.as_str()) {
                    let specificity = agent.len();
                    if best.map(|(s, _)| specificity > s).unwrap_or(true) {
                        best = Some((specificity, g));
                    }
                }
            }
        }
        let chosen = best.map(|(_, g)| g).or(star);
        match chosen {
            Some(g) => Self { rules: g.rules.clone(), crawl_delay: g.crawl_delay },
            None => Self::allow_all(),
        }
    }

    /// Longest matching rule wins; on a tie, allow wins. No rule means
    /// allowed. An empty `Disallow:` means allow-everything, which falls out
    /// naturally since the empty path matches with length 0.
    pub fn allows(&self, path: &str) -> bool {
        let path = if path.is_empty() { "/" } else { path };
        let mut verdict = true;
        let mut best_len = 0usize;
        for rule in &self.rules {
            if rule.path.is_empty() {
                continue; // "Disallow:" == no restriction
            }
            if path.starts_with(&rule.path) {
                let len = rule.path.len();
                if len > best_len || (len == best_len && rule.allow) {
                    best_len = len;
                    verdict = rule.allow;
                }
            }
        }
        verdict
    }
}
