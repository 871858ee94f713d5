"""Small English word list shared by the cipher languages, the default
subword vocabulary, and the synthetic-corpus generators."""

COMMON_WORDS = [
    "the", "of", "and", "to", "in", "is", "was", "for", "on", "that",
    "with", "as", "it", "at", "by", "from", "be", "are", "this", "have",
    "not", "but", "they", "his", "her", "she", "he", "we", "you", "or",
    "an", "will", "would", "there", "their", "what", "so", "up", "out",
    "if", "about", "who", "get", "which", "go", "me", "when", "make",
    "can", "like", "time", "no", "just", "him", "know", "take", "people",
    "into", "year", "your", "good", "some", "could", "them", "see",
    "other", "than", "then", "now", "look", "only", "come", "its", "over",
    "think", "also", "back", "after", "use", "two", "how", "our", "work",
    "first", "well", "way", "even", "new", "want", "because", "any",
    "these", "give", "day", "most", "us", "cat", "dog", "sat", "mat",
    "sun", "moon", "river", "house", "tree", "road", "water", "stone",
    "bird", "hand", "city", "night", "morning", "word", "book", "letter",
]
