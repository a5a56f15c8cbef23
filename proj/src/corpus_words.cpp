#include "hwd/corpus.hpp"

namespace hwd {

const std::vector<std::string>& default_word_list() {
  static const std::vector<std::string> words = {
    "able", "about", "above", "absent", "accept", "account", "acid", "across", "act", "action", "actor",
    "add", "adult", "advice", "afraid", "after", "again", "against", "age", "agent", "ago", "agree", "air",
    "alarm", "album", "alert", "alive", "all", "allow", "almost", "alone", "along", "already", "also",
    "always", "amber", "among", "amount", "ancient", "and", "angle", "angry", "animal", "ankle", "another",
    "answer", "any", "appear", "apple", "apron", "arch", "area", "argue", "arm", "armor", "army", "around",
    "arrive", "arrow", "art", "artist", "ash", "ask", "aspect", "at", "atom", "attack", "aunt", "autumn",
    "avenue", "award", "away", "axis", "baby", "back", "bacon", "bad", "badge", "bag", "baker", "balance",
    "ball", "bamboo", "banana", "band", "bank", "bare", "bark", "barn", "barrel", "base", "basin", "basket",
    "bath", "battle", "beach", "bean", "bear", "beard", "beat", "beauty", "bed", "bee", "beef", "beetle",
    "before", "begin", "behind", "bell", "below", "belt", "bench", "berry", "best", "better", "between",
    "bicycle", "big", "bird", "birth", "bit", "bite", "bitter", "black", "blade", "blanket", "blind", "block",
    "blood", "bloom", "blossom", "blow", "blue", "blunt", "board", "boat", "body", "boil", "bold", "bolt",
    "bond", "bone", "bonus", "book", "boot", "border", "both", "bottle", "bottom", "bowl", "box", "boy",
    "brain", "branch", "brass", "brave", "bread", "break", "breath", "breeze", "brick", "bride", "bridge",
    "brief", "bright", "bring", "broad", "broken", "brook", "brother", "brown", "brush", "bucket", "buffalo",
    "build", "bundle", "burden", "burn", "burst", "business", "busy", "but", "butler", "butter", "button",
    "buy", "cabin", "cable", "cactus", "cake", "call", "camel", "camera", "camp", "can", "canal", "candle",
    "candy", "canoe", "canvas", "canyon", "captain", "carbon", "card", "care", "carpet", "carry", "cart",
    "case", "castle", "cat", "cattle", "cause", "cave", "cedar", "cell", "center", "chain", "chair", "chalk",
    "chance", "change", "chapter", "charm", "chase", "cheap", "cheese", "cherry", "chest", "chicken", "chief",
    "child", "chimney", "chin", "choice", "chorus", "church", "cider", "cinema", "circle", "circus",
    "citizen", "city", "class", "clay", "clean", "clear", "cliff", "climb", "cloak", "clock", "cloth",
    "cloud", "clover", "coal", "coast", "coat", "cobalt", "coconut", "coffee", "coin", "cold", "collar",
    "color", "comb", "come", "comet", "common", "company", "compare", "complete", "copper", "copy", "coral",
    "cord", "cork", "corn", "cost", "cotton", "cough", "country", "course", "cover", "cow", "crack", "crane",
    "crater", "crayon", "cream", "credit", "creek", "crime", "crisp", "cross", "crowd", "crown", "crush",
    "cry", "crystal", "cup", "current", "curtain", "curve", "cushion", "cut", "daisy", "damage", "dance",
    "danger", "dark", "daughter", "dawn", "day", "dead", "dear", "death", "debt", "decide", "deep", "deer",
    "degree", "delta", "denim", "desert", "design", "desk", "detail", "develop", "diamond", "diary",
    "different", "dinner", "direction", "dirty", "discover", "disease", "dish", "distance", "divide",
    "doctor", "dog", "dolphin", "donkey", "door", "double", "doubt", "down", "dragon", "drain", "drama",
    "draw", "dream", "dress", "drift", "drink", "drive", "drop", "drum", "dry", "dust", "each", "eagle",
    "ear", "early", "earth", "east", "easy", "eat", "echo", "edge", "effect", "egg", "eight", "either",
    "elbow", "elder", "electric", "ember", "emerald", "empire", "end", "enemy", "energy", "engine", "enough",
    "enter", "equal", "even", "evening", "event", "ever", "every", "exact", "example", "except", "expert",
    "eye", "fabric", "face", "fact", "fairy", "falcon", "fall", "false", "family", "famous", "fancy", "far",
    "farm", "fast", "fat", "father", "fear", "feast", "feather", "feel", "fence", "ferry", "fever", "few",
    "fiber", "fiddle", "field", "fight", "figure", "fill", "film", "final", "finch", "find", "fine", "finger",
    "fire", "first", "fish", "five", "fix", "flag", "flame", "flat", "flight", "flint", "flock", "floor",
    "flower", "flute", "fly", "foam", "fold", "follow", "food", "foot", "force", "forest", "forget", "fork",
    "form", "forward", "fossil", "four", "fox", "frame", "free", "fresh", "friend", "fringe", "from", "front",
    "frost", "fruit", "full", "fun", "future", "galaxy", "game", "garden", "garlic", "gate", "gem", "general",
    "get", "giant", "gift", "ginger", "girl", "give", "glacier", "glad", "glass", "globe", "glory", "glove",
    "goat", "gold", "good", "grain", "grape", "grass", "gravel", "great", "green", "grey", "grip", "group",
    "grow", "guard", "guess", "guide", "guitar", "gun", "habit", "hair", "half", "hall", "hammer", "hand",
    "happy", "harbor", "hard", "hat", "hate", "have", "hazel", "head", "health", "hear", "heart", "heat",
    "heavy", "helmet", "help", "herb", "here", "hero", "high", "hill", "history", "hold", "hole", "home",
    "honey", "hook", "hope", "horn", "horse", "hospital", "hot", "hotel", "hour", "house", "how", "human",
    "humor", "hunt", "hurry", "ice", "iceberg", "idea", "igloo", "ill", "image", "income", "increase", "ink",
    "insect", "inside", "instrument", "iron", "island", "ivory", "jacket", "jaguar", "jelly", "jewel", "join",
    "journey", "judge", "juice", "jump", "jungle", "just", "kayak", "keep", "kernel", "kettle", "key", "kick",
    "kind", "king", "kingdom", "kiss", "kitchen", "knee", "knife", "knot", "know", "koala", "label", "ladder",
    "lagoon", "lake", "lamp", "land", "language", "lantern", "large", "laser", "last", "late", "laugh",
    "lava", "law", "lead", "leaf", "learn", "leather", "leave", "left", "leg", "legend", "lemon", "letter",
    "level", "library", "lift", "light", "like", "lily", "limit", "line", "linen", "lion", "lip", "liquid",
    "list", "listen", "little", "live", "lizard", "lobster", "lock", "long", "look", "loose", "loss", "lotus",
    "loud", "love", "low", "lumber", "lunch", "lyric", "machine", "magic", "magnet", "mail", "main", "make",
    "male", "man", "manager", "mango", "map", "maple", "marble", "mark", "market", "marry", "mass", "match",
    "matter", "meadow", "meal", "measure", "meat", "medical", "meet", "melon", "melt", "member", "memory",
    "metal", "middle", "milk", "mind", "mine", "minute", "mirror", "mist", "mixed", "model", "moment",
    "money", "monkey", "month", "moon", "morning", "mosaic", "moss", "mother", "motion", "motor", "mountain",
    "mouth", "move", "much", "mule", "muscle", "museum", "music", "mustard", "nail", "name", "narrow",
    "nation", "nature", "near", "neck", "nectar", "need", "needle", "nerve", "net", "never", "new", "news",
    "nickel", "night", "noble", "noise", "north", "nose", "note", "nothing", "notice", "novel", "number",
    "nurse", "nut", "oak", "oasis", "object", "ocean", "offer", "office", "oil", "old", "olive", "onion",
    "only", "open", "opera", "opinion", "orange", "orbit", "order", "organ", "other", "otter", "oven", "over",
    "owl", "owner", "oyster", "paddle", "page", "pain", "paint", "palace", "panda", "panel", "paper",
    "parcel", "parent", "park", "parrot", "part", "party", "pass", "past", "paste", "pastel", "path", "peace",
    "peach", "pearl", "pebble", "pen", "pencil", "people", "pepper", "person", "pet", "piano", "picture",
    "piece", "pig", "pilot", "pin", "pine", "pipe", "place", "plane", "planet", "plant", "plate", "play",
    "please", "plenty", "plough", "plum", "pocket", "point", "poison", "polish", "pond", "poor", "poppy",
    "porter", "position", "pot", "potato", "powder", "power", "present", "price", "print", "prison",
    "private", "prize", "problem", "process", "produce", "profit", "property", "prose", "public", "pull",
    "pump", "punish", "purple", "push", "put", "puzzle", "quality", "quarter", "quartz", "queen", "question",
    "quick", "quiet", "quill", "quite", "rabbit", "radar", "rail", "rain", "range", "rat", "rate", "raven",
    "raw", "ray", "reach", "read", "ready", "reason", "receipt", "recipe", "record", "red", "regret",
    "relation", "religion", "remain", "remember", "repeat", "report", "rest", "reward", "rhythm", "ribbon",
    "rice", "rich", "riddle", "right", "ring", "river", "road", "robin", "rock", "rocket", "rod", "roll",
    "roof", "room", "root", "rope", "rose", "rough", "round", "rub", "ruby", "rule", "run", "sad", "saddle",
    "safe", "sail", "salmon", "salt", "same", "sand", "satin", "say", "scale", "scarf", "school", "science",
    "scissors", "screw", "sea", "seat", "second", "secret", "see", "seed", "seem", "self", "sell", "send",
    "sense", "serious", "servant", "shade", "shadow", "shake", "shame", "sharp", "sheep", "shelf", "shell",
    "ship", "shirt", "shock", "shoe", "shore", "short", "shut", "side", "sign", "signal", "silence", "silk",
    "silver", "simple", "sister", "size", "sketch", "skin", "skirt", "sky", "sleep", "sleeve", "slip",
    "slogan", "slope", "slow", "small", "smash", "smell", "smile", "smoke", "smooth", "snake", "sneeze",
    "snow", "soap", "society", "sock", "socket", "soft", "solid", "some", "son", "song", "sort", "sound",
    "soup", "south", "space", "spade", "special", "spider", "spiral", "sponge", "spoon", "spring", "square",
    "squirrel", "stage", "stamp", "star", "start", "station", "statue", "steam", "steel", "stem", "step",
    "stick", "still", "stitch", "stocking", "stomach", "stone", "stop", "store", "stork", "story", "straight",
    "strange", "street", "stretch", "strong", "studio", "such", "sudden", "sugar", "summer", "summit", "sun",
    "support", "surprise", "swan", "sweet", "swim", "sword", "symbol", "system", "table", "tablet", "tail",
    "take", "talk", "tall", "taste", "tax", "teach", "team", "tell", "temple", "tend", "tennis", "test",
    "than", "thank", "that", "then", "theory", "there", "thick", "thin", "thing", "this", "thistle",
    "thought", "thread", "throat", "through", "thumb", "thunder", "ticket", "tiger", "tight", "till",
    "timber", "time", "tin", "tired", "toe", "together", "tomorrow", "tongue", "tooth", "top", "touch",
    "town", "trade", "train", "tray", "tree", "trick", "trouble", "trust", "truth", "tulip", "tunnel", "turn",
    "turtle", "twist", "umbrella", "under", "unit", "until", "upon", "use", "valley", "value", "velvet",
    "verse", "very", "vessel", "view", "violent", "violin", "voice", "volcano", "vote", "wagon", "waiting",
    "walk", "wall", "walnut", "walrus", "war", "warm", "wash", "waste", "watch", "water", "wave", "wax",
    "way", "weather", "week", "weight", "well", "west", "wet", "whale", "wheel", "when", "where", "while",
    "whip", "whistle", "white", "wide", "will", "willow", "wind", "window", "wine", "wing", "winter", "wire",
    "wise", "with", "wizard", "woman", "wood", "wool", "word", "work", "worm", "wound", "write", "wrong",
    "yacht", "year", "yellow", "yes", "young", "zebra", "zero",
  };
  return words;
}

}  // namespace hwd
