"""Task-aware judge prompt bank: 20 families, three dimension prompts each.

The 23 editing tasks map onto 20 judge families (all four text-aware tasks
share the Text family). Each (family, dimension) pair has its own rubric and
every prompt demands a bare integer score in {1,2,3}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .taxonomy import TASKS, TaskKind

JUDGE_BANK_VERSION = "1.0"

DIMENSIONS = ("f", "c", "q")
DIMENSION_TITLES = {
    "f": "Instruction Following",
    "c": "Editing Consistency",
    "q": "Generation Quality",
}

TASK_FAMILY: dict[str, str] = {
    "style_transfer": "Style",
    "tone_adjustment": "Tone",
    "viewpoint_transformation": "Viewpoint",
    "background_replacement": "Background",
    "object_addition": "Addition",
    "object_removal": "Removal",
    "object_replacement": "Replace",
    "action_editing": "Action",
    "part_extraction": "Extraction",
    "color_change": "Color",
    "material_change": "Material",
    "visual_beautification": "Beautification",
    "count_change": "Count",
    "size_change": "Size",
    "movie_poster_text": "Text",
    "gui_interface_text": "Text",
    "object_surface_text": "Text",
    "building_surface_text": "Text",
    "perceptual_reasoning": "Perceptual",
    "symbolic_reasoning": "Symbolic",
    "social_knowledge_reasoning": "Social",
    "scientific_knowledge_reasoning": "Scientific",
    "compositional_editing": "Compositional",
}

FAMILIES = tuple(dict.fromkeys(TASK_FAMILY.values()))

_OUTPUT = "Output only a single integer score in {1,2,3}. Do not add any extra text."

# family -> (grading subject, optional context paragraph,
#            {dim: (rubric title, (score-1 text, score-2 text, score-3 text))})
_BANK: dict[str, tuple[str, str, dict[str, tuple[str, tuple[str, str, str]]]]] = {
    "Replace": (
        "image replacement edits",
        "",
        {
            "f": ("Instruction Following", (
                "Target not replaced, or an unrelated object edited.",
                "Target largely replaced but other objects altered, remnants visible, or count/position clearly wrong.",
                "Perfect replacement: all and only the specified objects replaced; class, number, position, scale, pose and detail exactly match the prompt.",
            )),
            "c": ("Editing Consistency", (
                "Image heavily broken or new object deformed / extremely blurred.",
                "Basic style similar, but lighting or palette clashes; fuzzy edges or noise are noticeable.",
                "Completely seamless; new objects blend fully with the scene, edit area undetectable.",
            )),
            "q": ("Generation Quality", (
                "Floating, interpenetration, severe perspective/light errors; key original elements ruined; background heavily warped.",
                "Lighting, perspective and contact surfaces mostly correct; small but tolerable errors; background adjusted locally.",
                "Physically flawless and enhances realism: accurate highlights, shadows, reflections, ambient effects; background untouched.",
            )),
        },
    ),
    "Addition": (
        "image addition edits",
        "",
        {
            "f": ("Instruction Following", (
                "Nothing added or the added content is corrupt.",
                "Correct class, but key attributes (position, colour, size, count, etc.) are wrong.",
                "Every stated attribute correct and scene logic reasonable; only microscopic flaws.",
            )),
            "c": ("Editing Consistency", (
                "Image badly broken or full of artefacts.",
                "General style similar, but lighting or colours clearly clash; noticeable disharmony.",
                "Perfect blend; no visible difference between added object and original image.",
            )),
            "q": ("Physical & Detail Coherence", (
                "Severe physical errors (floating, wrong perspective/light); key original elements blocked; background heavily distorted.",
                "Lighting, perspective, and contact mostly correct; remaining flaws small and acceptable; limited background change.",
                "Added object enhances overall realism: precise highlights, shadows, ambient effects; background essentially untouched.",
            )),
        },
    ),
    "Social": (
        "social edits",
        "Social edits refer to modifications involving human interactions, social cues, gestures, "
        "emotional expressions, roles, or interpersonal relationships represented visually. Edits may "
        "change body language, group behavior, social context, or implied social meaning.",
        {
            "f": ("Instruction Following", (
                "The intended social cue or interaction is not changed, or the edit affects unrelated elements instead.",
                "The requested social modification is partially fulfilled but inaccurate, ambiguous, or incorrectly expressed.",
                "Perfect: the social cue/interaction/emotion changes exactly as instructed, with no unwanted side effects.",
            )),
            "c": ("Editing Consistency", (
                "The edit introduces severe inconsistencies: unnatural posture, broken anatomy, mismatched gaze direction, or implausible interaction.",
                "Mostly consistent but still contains mild mismatches in pose, facial expression, gaze, or interaction smoothness.",
                "Completely consistent: body language, facial cues, and interaction details remain natural and cohesive.",
            )),
            "q": ("Generation Quality", (
                "Poor quality: distorted faces, broken limbs, unnatural expressions, incorrect gaze, or social context visually damaged.",
                "Acceptable but with minor artefacts: slight blur, imperfect blending, mild anatomical inaccuracies, or small inconsistencies in expressions.",
                "High-quality rendering: natural expressions, clean anatomy, smooth interactions, and realistic visual coherence.",
            )),
        },
    ),
    "Removal": (
        "object removal edits",
        "",
        {
            "f": ("Instruction Following", (
                "Nothing removed, or an unrelated object edited.",
                "Target mostly removed but extra objects also deleted, or fragments of the target remain.",
                "Perfect: all and only the requested objects removed; every other element untouched.",
            )),
            "c": ("Editing Consistency", (
                "Image badly broken (large holes, strong artefacts).",
                "General look acceptable yet lighting/colour/style still clash; blur or noise visible.",
                "Seamless: removal is virtually impossible to spot.",
            )),
            "q": ("Generation Quality", (
                "Severe physical errors (floating items, wrong perspective/light); key scene elements damaged; background heavily warped.",
                "Lighting, perspective and contacts mostly correct; flaws small and tolerable; background adjusted locally.",
                "Physically flawless and even enhances realism: accurate light/shadow/texture infill, high-quality micro-details.",
            )),
        },
    ),
    "Action": (
        "action or expression change edits",
        "",
        {
            "f": ("Instruction Following", (
                "No visible change, or wrong action / expression.",
                "Main idea present but details off (angle, side, intensity, missing gesture).",
                "Exact match to prompt: every limb, gesture, and facial muscle aligns with the described action.",
            )),
            "c": ("Editing Consistency", (
                "Person unrecognisable; face or body replaced.",
                "Mostly same identity; moderate changes in some features but still recognisable.",
                "Perfect preservation of face, hairstyle, skin tone, clothing and accessories.",
            )),
            "q": ("Generation Quality", (
                "Severe artifacts: broken or duplicated limbs, extreme distortion, heavy noise/blur.",
                "Generally plausible; minor joint or shading issues; small noise/blur acceptable.",
                "Flawless realism or stylistic coherence; perfect anatomy, lighting, shadows and texture continuity.",
            )),
        },
    ),
    "Scientific": (
        "scientific edits",
        "Scientific edits involve modifying scientifically meaningful content, such as: physical "
        "plausibility, anatomical correctness, biological/chemical realism, or factual scientific "
        "elements in diagrams.",
        {
            "f": ("Instruction Following", (
                "The edit does not follow the scientific instruction at all; scientific facts, relationships, or structures remain unchanged or are incorrectly altered.",
                "The intended scientific change is partially achieved but contains inaccuracies, oversimplifications, or misinterpretation of the instruction.",
                "Perfect: the edit precisely follows the requested scientific modification with correct factual adjustment and no deviation.",
            )),
            "c": ("Editing Consistency", (
                "Severe scientific or visual inconsistencies (impossible geometry, broken diagrams, contradictory labels, wrong physical interactions).",
                "Mostly coherent yet noticeable inconsistencies remain (minor anatomical errors, mismatched labels, slight physical implausibility).",
                "Fully consistent: the edit is scientifically coherent, visually unified, and free of contradictions.",
            )),
            "q": ("Generation Quality", (
                "Significant visual or scientific errors (distorted structures, implausible physics, unreadable diagrams, damaged scientific elements).",
                "Generally acceptable scientific rendering with mild artefacts; diagrams or structures readable but not fully accurate or clean.",
                "High-quality scientific depiction with clear structures, correct physical relations, precise scientific elements, and visually clean rendering.",
            )),
        },
    ),
    "Symbolic": (
        "symbolic edits",
        "Symbolic edits involve modifying symbols, icons, signs, logos, emblems, arrows, mathematical "
        "symbols, or any visual marker representing abstract meaning. This includes changing their "
        "shape, type, orientation, semantics, or replacing one symbol with another.",
        {
            "f": ("Instruction Following", (
                "The symbol requested in the instruction is not changed, or an unrelated element is modified.",
                "The symbolic change is partially correct but inaccurate in shape/meaning, or extra symbols are unintentionally altered.",
                "Perfect: the correct symbol is edited exactly as instructed, with no unwanted changes to other symbols or elements.",
            )),
            "c": ("Editing Consistency", (
                "Severe artefacts: symbol edges broken, shapes distorted, inconsistent strokes, or symbol meaning unclear.",
                "Mostly consistent but with minor distortions, uneven line weights, mismatched style, or visible blending errors.",
                "Seamless: symbol rendering is clean, stylistically consistent with the image, and artefacts are imperceptible.",
            )),
            "q": ("Generation Quality", (
                "Poor rendering: jagged edges, unreadable symbols, incorrect geometry, inconsistent thickness, or integration breaks the scene.",
                "Generally acceptable symbol rendering but with small flaws (minor blur, uneven outlines, slight aliasing, or imperfect integration).",
                "High-quality symbol rendering: crisp lines, accurate shapes, smooth edges, correct proportions, and natural integration into the image.",
            )),
        },
    ),
    "Perceptual": (
        "perceptual edits",
        "Perceptual edits refer to modifications of sensory attributes such as brightness, contrast, "
        "sharpness, noise level, exposure, clarity, or other image-level perceptual adjustments.",
        {
            "f": ("Instruction Following", (
                "The perceptual attribute requested is not changed, or a different unrelated attribute is edited.",
                "The change matches the instruction directionally but is too mild, too strong, or mixed with unintended adjustments.",
                "Perfect: the requested perceptual adjustment is applied accurately and only to the intended attribute.",
            )),
            "c": ("Editing Consistency", (
                "Severe inconsistencies: uneven lighting, patchy brightness, local halos, colour shifts, or perceptual results applied only partially.",
                "Mostly consistent but minor visual inconsistencies remain (slight tone mismatch, small uneven regions, borderline over-processing).",
                "Completely consistent: perceptual adjustments are uniform, smooth, and visually coherent across the entire image.",
            )),
            "q": ("Generation Quality", (
                "Poor rendering: heavy artefacts, clipping, extreme noise, over-saturation, banding, or severe loss of detail.",
                "Generally acceptable quality with minor artefacts (slight blur, mild noise, small dynamic-range inconsistencies).",
                "High-quality output: clean, natural, balanced adjustments with preserved detail and no perceptual artefacts.",
            )),
        },
    ),
    "Compositional": (
        "compositional edits",
        "Compositional edits involve modifying the spatial arrangement, layout, or structural "
        "composition of scene elements, such as repositioning objects, adjusting spatial balance, "
        "grouping, alignment, or reorganizing visual structure.",
        {
            "f": ("Instruction Following", (
                "The spatial or structural change requested is not made, or edits affect unrelated elements instead.",
                "The instructed compositional change is partially met but inaccurate: misaligned, misplaced, or only roughly approximated.",
                "Perfect: the spatial layout or compositional structure matches the instruction precisely with no unwanted alterations.",
            )),
            "c": ("Editing Consistency", (
                "Major inconsistencies: broken perspective, incorrect object relationships, collisions, floating objects, or unrealistic spatial configuration.",
                "Mostly consistent but with minor mismatches in scale, depth, perspective cues, or object contact.",
                "Fully consistent and visually coherent: all modified elements integrate with correct perspective, scale, and spatial logic.",
            )),
            "q": ("Generation Quality", (
                "Poor rendering: perspective distortions, warped geometry, inconsistent object boundaries, or degraded spatial quality.",
                "Overall acceptable composition with small artefacts (minor warping, slight mis-scaling, subtle blending issues).",
                "High-quality spatial rendering: accurate depth, clean geometry, consistent perspective, and visually stable composition.",
            )),
        },
    ),
    "Style": (
        "style edits",
        "Style edits involve modifying the artistic, visual, or aesthetic style of the image, such as "
        "painting style, texture style, artistic medium, stroke pattern, visual theme, abstraction "
        "level, or global artistic identity.",
        {
            "f": ("Instruction Following", (
                "The intended style change is not reflected at all, or an unrelated visual effect is applied instead.",
                "The style direction is correct but incomplete, weak, or mixed with unintended stylistic changes.",
                "Perfect: the requested style is expressed clearly, accurately, and exclusively as instructed.",
            )),
            "c": ("Editing Consistency", (
                "Severe stylistic inconsistencies: mismatched textures, uneven strokes, inconsistent themes, or local style breakdowns.",
                "Generally consistent but with minor mismatches in texture, stroke density, colour palette, or pattern smoothness.",
                "Completely cohesive: style is uniformly and coherently applied across the entire image with no visible inconsistencies.",
            )),
            "q": ("Generation Quality", (
                "Poor rendering: artefacts in strokes or textures, muddy colours, broken patterns, or physically incoherent artistic details.",
                "Acceptable stylistic rendering but with minor artefacts (slight blur, inconsistent texture density, small colour issues).",
                "High-quality stylistic output: clean strokes/textures, consistent colour harmony, and high-fidelity artistic detailing.",
            )),
        },
    ),
    "Tone": (
        "tone edits",
        "Tone edits involve modifying the emotional, atmospheric, or mood-related characteristics of "
        "the image, including warmth, coolness, dramatic tone, cinematic mood, gloominess, vibrancy, "
        "or emotional ambience.",
        {
            "f": ("Instruction Following", (
                "The requested tonal/mood change is not applied, or the edit introduces an unrelated atmosphere.",
                "The tonal shift follows the general direction of the instruction but is too weak, too strong, or partially incorrect.",
                "Perfect: the intended emotional or atmospheric tone is captured precisely and exclusively as instructed.",
            )),
            "c": ("Editing Consistency", (
                "Major tonal inconsistencies: uneven colour temperature, patchy atmosphere, contradictory mood signals, or localised tone errors.",
                "Mostly consistent but minor mismatches remain, such as slight temperature drift or small inconsistencies in contrast or ambience.",
                "Fully consistent: the tonal mood is coherent across the entire image with smooth colour and atmosphere continuity.",
            )),
            "q": ("Generation Quality", (
                "Low-quality tonal rendering: banding, colour blocking, severe noise, unnatural contrast, or degraded ambience.",
                "Good overall quality with minor artefacts such as slight noise, mild colour imbalance, or subtle tone gradient issues.",
                "High-quality tonal rendering: smooth gradients, clean colours, stable atmosphere, and visually harmonious mood representation.",
            )),
        },
    ),
    "Viewpoint": (
        "viewpoint edits",
        "Viewpoint edits involve modifying the camera position, angle, orientation, or field of view, "
        "such as shifting perspective (e.g., front view to side view), raising/lowering camera height, "
        "rotating the viewpoint, or changing zoom level or focal length.",
        {
            "f": ("Instruction Following", (
                "The viewpoint does not change in the way the instruction requests, or an unrelated transformation is applied.",
                "The viewpoint shift is directionally correct but inaccurate in magnitude, orientation, or partially mismatched.",
                "Perfect: the camera/viewpoint modification matches the instruction precisely with no unintended distortions.",
            )),
            "c": ("Editing Consistency", (
                "Severe inconsistencies: distorted geometry, broken perspective, misaligned structures, floating objects, or unrealistic scene deformation.",
                "Mostly consistent viewpoint transformation but with minor issues in depth, scale, alignment, or object relationships.",
                "Fully coherent: perspective, scale, parallax, and spatial relations all match a consistent new viewpoint.",
            )),
            "q": ("Generation Quality", (
                "Poor rendering of the new viewpoint: warped objects, inconsistent depth cues, incorrect occlusions, blurred or broken structures.",
                "Acceptable rendering with mild artefacts (slight geometry distortion, small occlusion issues, minor perspective irregularities).",
                "High-quality rendering: clean geometry, stable depth, correct occlusions, and physically coherent viewpoint transformation.",
            )),
        },
    ),
    "Background": (
        "background edits",
        "Background edits involve modifying the scene environment behind the main subject, such as "
        "changing locations, adding/removing contextual elements, altering scenery type, or replacing "
        "the background with a new one.",
        {
            "f": ("Instruction Following", (
                "The background is not changed as requested, or an unrelated region is edited instead.",
                "The background change partially matches the instruction but is incomplete, inaccurate, or inconsistent in theme.",
                "Perfect: the background is modified exactly as instructed with no unintended changes to the main subject or other elements.",
            )),
            "c": ("Editing Consistency", (
                "Major inconsistencies: mismatched lighting, incorrect depth, broken horizon lines, visible seams, or environmental contradictions.",
                "Mostly consistent background replacement but minor mismatches remain (slightly off lighting, subtle blending issues, small perspective errors).",
                "Fully consistent: background integrates naturally with correct lighting, depth, colour harmony, and scene logic.",
            )),
            "q": ("Generation Quality", (
                "Poor rendering: blurry or warped background, heavy artefacts, broken structures, unrealistic scenery, or degraded composition.",
                "Acceptable but with minor artefacts (slight blur, mild noise, small blending imperfections, local geometric inconsistencies).",
                "High-quality background rendering: clear details, stable geometry, coherent lighting, and visually realistic integration with the scene.",
            )),
        },
    ),
    "Extraction": (
        "extraction edits",
        "Extraction edits involve isolating a target object or region from its surroundings, such as "
        "cutting it out, placing it on a clean/transparent background, or clearly separating it from "
        "other content, while preserving the target's appearance.",
        {
            "f": ("Instruction Following", (
                "The requested target is not extracted at all, the wrong region is extracted, or most of the extracted content is unrelated.",
                "The intended target is extracted but with noticeable mistakes: parts missing, extra background included, or multiple unintended regions extracted.",
                "Perfect: exactly the requested target is extracted, fully included, with no irrelevant regions or missing parts.",
            )),
            "c": ("Editing Consistency", (
                "Extraction is badly inconsistent: broken or jagged edges, obvious holes, missing chunks, heavy haloing, or visible mask errors.",
                "Generally consistent extraction but with minor artefacts (slightly rough edges, small leftover background pieces, mild halo or fringe).",
                "Seamless: clean, stable boundaries; the extracted region looks coherent and well separated, with no visible masking defects.",
            )),
            "q": ("Generation Quality", (
                "Low-quality rendering of the extracted content: strong blur, compression artefacts, distorted structure, or heavy degradation around the edges.",
                "Acceptable quality: the extracted content is mostly clear, with only small artefacts (slight blur, mild noise, minor edge softness).",
                "High-quality output: sharp, detailed, and stable appearance of the extracted content, with clean edges and no distracting artefacts.",
            )),
        },
    ),
    "Color": (
        "color edits",
        "Color edits involve changing the hue, saturation, brightness, palette, or specific colors of "
        "objects or regions, such as making an object red, desaturating a region, or shifting global "
        "color tone.",
        {
            "f": ("Instruction Following", (
                "The requested color change is not applied, or the wrong element/color is modified.",
                "The color edit follows the instruction directionally but is inaccurate, incomplete, too weak/strong, or applied to extra regions unintentionally.",
                "Perfect: the correct region is modified with the exact color change instructed and no unintended color alterations elsewhere.",
            )),
            "c": ("Editing Consistency", (
                "Severe inconsistencies: patchy color application, uneven tone, unnatural gradients, or mismatched lighting effects.",
                "Mostly consistent but small inconsistencies exist (slight uneven color areas, minor blending issues, or subtle color leakage).",
                "Fully consistent: color changes are smooth, even, and visually coherent across the edited region(s).",
            )),
            "q": ("Generation Quality", (
                "Poor color rendering: banding, unnatural hues, heavy noise, severe oversaturation, or damaged structure/texture due to color changes.",
                "Acceptable color quality with minor artefacts (slight noise, small tonal imbalance, mild overshoot/undershoot).",
                "High-quality color rendering: natural hues, smooth gradients, stable texture preservation, and visually pleasing output.",
            )),
        },
    ),
    "Material": (
        "material edits",
        "Material edits involve changing the physical material or surface property of an object, such "
        "as turning wood into metal, cloth into leather, plastic into glass, or altering reflectivity, "
        "roughness, or texture type.",
        {
            "f": ("Instruction Following", (
                "The object's material does not change as requested, or an unrelated object's material is altered instead.",
                "The material change is directionally correct but incomplete, mixed with the old material, inaccurate in appearance, or applied to extra regions.",
                "Perfect: the intended object's material is changed precisely to the requested new material with no unintended spillover.",
            )),
            "c": ("Editing Consistency", (
                "Severe inconsistencies: mixed material cues, incorrect reflections, mismatched texture patches, or physically impossible surface characteristics.",
                "Mostly consistent but with minor mismatches in reflectance, texture density, or material detail uniformity.",
                "Fully consistent: the new material has uniform texture, correct physical properties, and coherent appearance across the object.",
            )),
            "q": ("Generation Quality", (
                "Poor material rendering: muddy textures, broken reflections, unrealistic surface behaviour, or visible artefacts.",
                "Acceptable quality with mild artefacts (slightly blurred texture, small reflection inconsistencies, minor physical inaccuracies).",
                "High-quality material rendering: sharp, realistic textures, correct reflectance/roughness, and faithful representation of physical properties.",
            )),
        },
    ),
    "Beautification": (
        "beautification edits",
        "Beautification edits involve enhancing aesthetic qualities of the subject, such as smoothing "
        "skin, whitening teeth, improving symmetry, refining makeup, adjusting facial features subtly, "
        "improving lighting on faces, or enhancing general attractiveness while following the specific "
        "instruction.",
        {
            "f": ("Instruction Following", (
                "The intended beautification change is not applied, or irrelevant regions are edited instead of the instructed area.",
                "The enhancement follows the instructional direction but is too strong, too weak, incomplete, or introduces unintended modifications.",
                "Perfect: the requested beautification adjustment is applied precisely, naturally, and only where intended.",
            )),
            "c": ("Editing Consistency", (
                "Major inconsistencies: unnatural skin smoothing, warped features, uneven retouching, or mismatched lighting/makeup across regions.",
                "Mostly consistent but contains minor inconsistencies (slight over-smoothing, small blending issues, mild asymmetry).",
                "Fully consistent: beautification looks natural and uniform with no noticeable artefacts or mismatches across the face/body.",
            )),
            "q": ("Generation Quality", (
                "Poor visual quality: plastic-like skin, distorted features, harsh artifacts, over-sharpened or overly airbrushed regions.",
                "Acceptable beautification with minor artefacts (slight blur, mild noise, subtle inconsistencies in texture or symmetry).",
                "High-quality output: natural-looking enhancements, clean textures, realistic lighting, and smooth, refined details.",
            )),
        },
    ),
    "Count": (
        "count edits",
        "Count edits involve modifying the number of objects in the scene, such as increasing, "
        "decreasing, duplicating, or eliminating instances of a specific object category according to "
        "the instruction.",
        {
            "f": ("Instruction Following", (
                "The number of objects does not change as instructed, or the wrong object category is counted/modified.",
                "The object count direction is correct but inaccurate: too many, too few, or mixed with unintended removals/additions.",
                "Perfect: the object count matches the instruction exactly, with no unintended changes to other objects.",
            )),
            "c": ("Editing Consistency", (
                "Strong inconsistencies: duplicated items look unnatural, obvious cloning artifacts, broken geometry, or mismatched appearance.",
                "Mostly consistent but with slight differences in appearance, lighting, or texture across added/removed objects.",
                "Fully consistent: duplicated or removed regions integrate naturally with coherent lighting, texture, and geometry.",
            )),
            "q": ("Generation Quality", (
                "Low-quality rendering: blurry or warped added objects, deformed duplicates, visible erasure marks, or inconsistent image quality.",
                "Acceptable visual quality but with minor issues (small blur, mild noise, slight texture/perspective mismatch).",
                "High-quality rendering: added or removed objects are visually clean, realistic, and well integrated into the scene.",
            )),
        },
    ),
    "Size": (
        "size edits",
        "Size edits involve changing the scale of specific objects or regions, such as making an "
        "object larger/smaller, resizing a person, or adjusting the relative size of elements in the "
        "scene according to the instruction.",
        {
            "f": ("Instruction Following", (
                "The requested object is not resized at all, or the wrong element is resized.",
                "The resize direction is correct (bigger/smaller) but with inaccurate magnitude, partial resizing, or unintended extra elements affected.",
                "Perfect: exactly the instructed object(s) are resized in the correct direction and degree, with no unwanted side effects.",
            )),
            "c": ("Editing Consistency", (
                "Severe inconsistencies: resized object breaks perspective, contact with ground, or relations with nearby objects; obvious stretching or squashing.",
                "Mostly consistent but with minor issues in scale, perspective, or contact (slightly off proportions, mild stretching/compression).",
                "Fully consistent: resized objects preserve proportions, perspective, and physical relations, and fit naturally into the scene.",
            )),
            "q": ("Generation Quality", (
                "Poor visual quality: noticeable pixelation, warped geometry, blurred regions, or strong artefacts due to resizing.",
                "Acceptable quality with mild artefacts (slight blur, minor edge issues, small texture inconsistencies).",
                "High-quality rendering: sharp details, clean edges, and stable textures on resized objects with no distracting artefacts.",
            )),
        },
    ),
    "Text": (
        "text edits",
        "Text edits involve modifying any form of visible text that appears in the scene, including: "
        "posters, billboards, signage, UI/GUI elements, product labels, printed object text, or text "
        "on buildings. This includes changing the content, wording, symbols, phrasing, or specific "
        "characters according to the instruction.",
        {
            "f": ("Instruction Following", (
                "The text does not reflect the instruction, the wrong text region is edited, or no meaningful text update is made.",
                "The text partially follows the instruction: some words/characters correct, others incorrect, missing, or incomplete.",
                "Perfect: the edited text exactly matches the required content in all relevant regions, with no unintended text changes elsewhere.",
            )),
            "c": ("Editing Consistency", (
                "Severe inconsistencies: text misaligned, warped incorrectly, wrong perspective, floating above surfaces, mismatched fonts, or broken UI layout.",
                "Mostly consistent but with minor issues (slightly off alignment, mild mismatch in font weight/size, minor warping inconsistencies).",
                "Fully consistent: text aligns naturally with the surface or UI element, respecting its geometry, curvature, perspective, spacing, and layout style.",
            )),
            "q": ("Generation Quality", (
                "Poor rendering: unreadable text, heavy blur, jagged edges, distorted characters, noisy regions, or artefacts around the edited text area.",
                "Acceptable quality with minor issues (slight blur, small aliasing, mild artefacts, or small inconsistencies in clarity).",
                "High-quality text rendering: crisp, clean, readable characters with smooth edges, stable textures, and no distracting artefacts on any surface.",
            )),
        },
    ),
}


def _build_prompt(family: str, dimension: str) -> str:
    subject, context, dims = _BANK[family]
    title, levels = dims[dimension]
    generic = DIMENSION_TITLES[dimension]
    parts = [
        f"You are a data rater specializing in grading {subject}. "
        f"Two images (before and after editing) and the editing instruction "
        f"will be provided. Evaluate {title} only."
    ]
    if title != generic:
        parts[0] += f" ({title} stands in for {generic} for this edit family.)"
    if context:
        parts.append(context)
    rubric = "\n".join(f"{score}: {text}" for score, text in zip((1, 2, 3), levels))
    parts.append(f"Scoring (1-3)\n{rubric}")
    parts.append(_OUTPUT)
    return "\n\n".join(parts)


@dataclass(frozen=True)
class JudgePromptBank:
    """Every task resolves to one family with all three dimension prompts."""

    version: str = JUDGE_BANK_VERSION

    def family_for(self, task: TaskKind) -> str:
        return TASK_FAMILY[task.id]

    def prompt(self, task: TaskKind, dimension: str) -> str:
        if dimension not in DIMENSIONS:
            raise KeyError(f"unknown dimension {dimension!r}")
        return _build_prompt(self.family_for(task), dimension)

    def all_prompts(self) -> dict[tuple[str, str], str]:
        return {(fam, dim): _build_prompt(fam, dim) for fam in FAMILIES for dim in DIMENSIONS}


def validate_bank() -> None:
    """Every task maps to a family and every (family, dimension) has a prompt."""
    for task in TASKS:
        family = TASK_FAMILY[task.id]
        if family not in _BANK:
            raise AssertionError(f"task {task.id} maps to unknown family {family}")
    for family in FAMILIES:
        _, _, dims = _BANK[family]
        missing = [d for d in DIMENSIONS if d not in dims]
        if missing:
            raise AssertionError(f"family {family} missing dimensions {missing}")
